#include "polaron_hhg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <ostream>

#include <fftw3.h>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "polaron_hhg/errors.hpp"

namespace polaron {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> real_dft(std::span<const double> input) {
  const auto n = static_cast<int>(input.size());
  std::vector<double> in(input.begin(), input.end());
  std::vector<std::complex<double>> out(input.size() / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<double> acceleration(std::span<const double> dipole, double dt) {
  if (dipole.size() < 3) {
    throw InvalidParameterError("acceleration: need at least 3 samples");
  }
  if (!(dt > 0.0)) throw InvalidParameterError("acceleration: dt must be > 0");
  std::vector<double> out(dipole.size(), 0.0);
  const double inv = 1.0 / (dt * dt);
  for (std::size_t i = 1; i + 1 < dipole.size(); ++i) {
    out[i] = (dipole[i + 1] - 2.0 * dipole[i] + dipole[i - 1]) * inv;
  }
  return out;
}

std::vector<double> hann_window(std::span<const double> series) {
  if (series.size() < 2) throw InvalidParameterError("hann_window: need at least 2 samples");
  const double denom = static_cast<double>(series.size() - 1);
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(i) / denom);
    out[i] = series[i] * s * s;
  }
  // Exact zeros at the ends; sin(pi) is only ~1e-16.
  out.front() = 0.0;
  out.back() = 0.0;
  return out;
}

SpectrumResult yield_spectrum(std::span<const double> accel, double dt, double omega_l,
                              const SpectrumOptions& options) {
  if (accel.empty()) throw InvalidParameterError("yield_spectrum: empty input");
  if (!(dt > 0.0) || !(omega_l > 0.0)) {
    throw InvalidParameterError("yield_spectrum: dt and omega_l must be > 0");
  }
  const std::size_t n = accel.size();
  std::vector<double> signal = options.apply_window && n >= 2
                                   ? hann_window(accel)
                                   : std::vector<double>(accel.begin(), accel.end());

  SpectrumResult out;
  out.n_samples = n;
  out.dt = dt;
  out.amplitude = real_dft(signal);
  const std::size_t bins = out.amplitude.size();
  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  out.orders.resize(bins);
  out.yield_raw.resize(bins);
  out.floored.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    out.amplitude[k] *= dt;
    out.orders[k] = static_cast<double>(k) * d_omega / omega_l;
    const double power = std::norm(out.amplitude[k]);
    out.floored[k] = !(power > kYieldFloor);
    out.yield_raw[k] = std::log10(std::max(power, kYieldFloor));
  }
  const auto nearest = static_cast<std::size_t>(std::llround(omega_l / d_omega));
  out.fundamental_bin = std::min(nearest, bins - 1);
  const double reference = out.yield_raw[out.fundamental_bin];
  out.yield_norm.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) out.yield_norm[k] = out.yield_raw[k] - reference;
  return out;
}

SpectrumResult harmonic_spectrum(const TimeSeries& series, double omega_l) {
  if (series.dipole.size() < 4) {
    throw InvalidParameterError("harmonic_spectrum: time series too short");
  }
  const std::vector<double> accel = acceleration(series.dipole, series.sample_dt);
  const std::span<const double> periodic(accel.data(), accel.size() - 1);
  return yield_spectrum(periodic, series.sample_dt, omega_l);
}

double band_mean(const SpectrumResult& spectrum, double lo, double hi) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < spectrum.orders.size(); ++k) {
    if (spectrum.orders[k] >= lo && spectrum.orders[k] <= hi) {
      sum += spectrum.yield_norm[k];
      ++count;
    }
  }
  if (count == 0) {
    throw InvalidParameterError(fmt::format("band_mean: no bins in [{}, {}]", lo, hi));
  }
  return sum / static_cast<double>(count);
}

double max_abs_difference(const SpectrumResult& a, const SpectrumResult& b, double lo, double hi) {
  if (a.orders.size() != b.orders.size()) {
    throw DimensionMismatchError("max_abs_difference: spectra use different grids");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.orders.size(); ++k) {
    if (a.orders[k] >= lo && a.orders[k] <= hi) {
      worst = std::max(worst, std::abs(a.yield_norm[k] - b.yield_norm[k]));
    }
  }
  return worst;
}

void write_spectrum(std::ostream& out, const SpectrumResult& spectrum, double max_order) {
  fmt::print(out, "# harmonic_order\tY_N\n");
  for (std::size_t k = 0; k < spectrum.orders.size() && spectrum.orders[k] <= max_order; ++k) {
    fmt::print(out, "{:.15g}\t{:.15g}\n", spectrum.orders[k], spectrum.yield_norm[k]);
  }
}

}  // namespace polaron
