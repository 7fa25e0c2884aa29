#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "polaron_hhg/dynamics.hpp"

namespace polaron {

/// Power below this is clamped before taking log10.
inline constexpr double kYieldFloor = 1e-300;

struct SpectrumResult {
  std::vector<double> orders;      // omega_k / omega_L for k = 0..n/2
  std::vector<double> yield_raw;   // log10 |dt * DFT|^2
  std::vector<double> yield_norm;  // yield_raw - yield_raw[fundamental_bin]
  std::vector<std::complex<double>> amplitude;  // dt * DFT, bins 0..n/2
  std::vector<bool> floored;       // power hit kYieldFloor
  std::size_t fundamental_bin = 0;
  std::size_t n_samples = 0;
  double dt = 0.0;
};

/// (x[i+1] - 2 x[i] + x[i-1]) / dt^2 inside, zero at both ends.
std::vector<double> acceleration(std::span<const double> dipole, double dt);

/// Multiplies by sin^2(pi i / (M-1)).
std::vector<double> hann_window(std::span<const double> series);

struct SpectrumOptions {
  bool apply_window = true;
};

/// Windowed DFT of an evenly sampled acceleration, bins k <= n/2 with
/// omega_k = 2 pi k / (n dt). The fundamental is the bin nearest omega_L.
SpectrumResult yield_spectrum(std::span<const double> accel, double dt, double omega_l,
                              const SpectrumOptions& options = {});

/// Dipole -> acceleration -> Hann -> DFT over the samples t_0 .. t_{n-1};
/// the t_final sample closes the period and is not transformed.
SpectrumResult harmonic_spectrum(const TimeSeries& series, double omega_l);

/// Mean of yield_norm over bins with lo <= order <= hi.
double band_mean(const SpectrumResult& spectrum, double lo, double hi);

/// max |a - b| of yield_norm over lo <= order <= hi; grids must match.
double max_abs_difference(const SpectrumResult& a, const SpectrumResult& b, double lo, double hi);

/// "harmonic_order<TAB>Y_N" rows for orders <= max_order.
void write_spectrum(std::ostream& out, const SpectrumResult& spectrum, double max_order);

}  // namespace polaron
