#include "polaron_hhg/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "polaron_hhg/operators.hpp"

namespace polaron {

namespace {

std::string describe(const ModelParams& m) {
  return fmt::format("N={}, L={}, gamma={:.6g}, omega_ph={:.6g}, v={:.6g}, w={:.6g}", m.n_cells,
                     m.phonon_cutoff, m.gamma, m.omega_ph, m.v, m.w);
}

// Flattens a chain of nested exceptions into one message.
std::string flatten(const std::exception& e) {
  std::string message = e.what();
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    message += ": " + flatten(inner);
  } catch (...) {
    message += ": unknown error";
  }
  return message;
}

ScanPoint run_scan_point(const ModelParams& model, const LaserParams& laser,
                         const PipelineOptions& options) {
  ScanPoint point;
  point.gamma = model.gamma;
  point.phonon_cutoff = model.phonon_cutoff;
  try {
    PointResult result = run_point(model, laser, options);
    point.summary = std::move(result.summary);
    point.spectrum = std::move(result.spectrum);
  } catch (const std::exception& e) {
    point.error = flatten(e);
  }
  return point;
}

}  // namespace

PointResult run_point(const ModelParams& model, const LaserParams& laser,
                      const PipelineOptions& options) {
  try {
    laser.validate();
    const BasisIndex basis(model);
    const SparseOperator hamiltonian = build_hamiltonian(basis);
    const SparseOperator position = build_position(basis);

    TruncationOptions truncation = options.truncation;
    truncation.min_states = std::max<Index>(truncation.min_states, basis.n_sites());
    auto eig = std::make_shared<EigenBasis>(
        solve_truncated_basis(hamiltonian, position, laser.omega_l, truncation));

    PointResult result;
    result.summary.dim = basis.dim();
    result.summary.nr = eig->size();
    result.summary.ground_energy = eig->ground_energy();
    result.summary.degenerate_ground = eig->degenerate_ground;
    result.summary.relevance = state_relevance(*eig, laser.omega_l);

    const Observables observables = make_observables(*eig, basis);
    result.series = propagate(*eig, laser, options.propagation, observables);
    result.spectrum = harmonic_spectrum(result.series, laser.omega_l);
    if (options.keep_eigenbasis) result.eigenbasis = std::move(eig);
    return result;
  } catch (const Error&) {
    std::throw_with_nested(PointError(fmt::format("pipeline failed at ({})", describe(model))));
  }
}

std::vector<double> default_gamma_grid() {
  constexpr int points = 26;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = -0.05 + 0.05 * i / (points - 1);
  grid.back() = 0.0;
  return grid;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task) {
  const auto threads = static_cast<std::size_t>(std::clamp<long>(workers, 1, 256));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, count); ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

GammaScanResult gamma_scan(const ScanSpec& spec) {
  GammaScanResult result;
  result.points.resize(spec.gamma_values.size());
  parallel_for(spec.gamma_values.size(), spec.workers, [&](std::size_t i) {
    ModelParams model = spec.model;
    model.gamma = spec.gamma_values[i];
    result.points[i] = run_scan_point(model, spec.laser, spec.options);
  });
  return result;
}

ConvergenceReport convergence_study(const ScanSpec& spec) {
  if (spec.l_values.empty()) throw InvalidParameterError("l_values: empty");
  if (!std::is_sorted(spec.l_values.begin(), spec.l_values.end()) ||
      std::adjacent_find(spec.l_values.begin(), spec.l_values.end()) != spec.l_values.end()) {
    throw InvalidParameterError("l_values: must be strictly ascending");
  }
  ConvergenceReport report;
  report.entries.resize(spec.l_values.size());
  parallel_for(spec.l_values.size(), spec.workers, [&](std::size_t i) {
    ModelParams model = spec.model;
    model.phonon_cutoff = spec.l_values[i];
    auto& entry = report.entries[i];
    try {
      entry.dim = static_cast<Index>(total_dim(model));
    } catch (const Error&) {
      entry.dim = -1;
    }
    entry.point = run_scan_point(model, spec.laser, spec.options);
  });
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    auto& entry = report.entries[i];
    entry.max_abs_diff_prev = nan;
    if (i == 0) continue;
    const auto& prev = report.entries[i - 1].point;
    if (entry.point.spectrum && prev.spectrum) {
      entry.max_abs_diff_prev = max_abs_difference(*entry.point.spectrum, *prev.spectrum,
                                                   report.order_lo, report.order_hi);
    }
  }
  return report;
}

Eigen::MatrixXd correlation_map(const EigenBasis& eig, Index state, const BasisIndex& basis) {
  if (state < 0 || state >= eig.size()) {
    throw IndexOutOfRangeError(
        fmt::format("correlation_map: state {} outside [0, {})", state, eig.size()));
  }
  if (eig.vectors.rows() != basis.dim()) {
    throw DimensionMismatchError("correlation_map: eigenvectors do not match the basis");
  }
  const int sites = basis.n_sites();
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(sites, sites);
  const auto phi = eig.vectors.col(state);
  for (Index s = 0; s < basis.dim(); ++s) {
    const double weight = phi[s] * phi[s];
    if (weight == 0.0) continue;
    const int r = basis.electron_site(s);
    for (int f = 0; f < sites; ++f) map(f, r) += weight * basis.occupation(s, f);
  }
  return map;
}

void write_heatmap(std::ostream& out, const GammaScanResult& scan, double max_order) {
  fmt::print(out, "# gamma\tharmonic_order\tY_N\n");
  for (const auto& p : scan.points) {
    if (!p.spectrum) continue;
    const auto& s = *p.spectrum;
    for (std::size_t k = 0; k < s.orders.size() && s.orders[k] <= max_order; ++k) {
      fmt::print(out, "{:.15g}\t{:.15g}\t{:.15g}\n", p.gamma, s.orders[k], s.yield_norm[k]);
    }
  }
}

void write_relevance(std::ostream& out, const GammaScanResult& scan) {
  fmt::print(out, "# gamma\tharmonic_order\tlog10_Tgs2\n");
  for (const auto& p : scan.points) {
    if (!p.summary) continue;
    for (const auto& r : p.summary->relevance) {
      fmt::print(out, "{:.15g}\t{:.15g}\t{:.15g}\n", p.gamma, r.order, r.log10_tgs2);
    }
  }
}

void write_scan_failures(std::ostream& out, const GammaScanResult& scan) {
  fmt::print(out, "# gamma\tphonon_cutoff\terror\n");
  for (const auto& p : scan.points) {
    if (!p.ok()) fmt::print(out, "{:.15g}\t{}\t{}\n", p.gamma, p.phonon_cutoff, p.error);
  }
}

void write_convergence(std::ostream& out, const ConvergenceReport& report) {
  fmt::print(out, "# max_abs_diff_prev over harmonic orders [{}, {}]\n", report.order_lo,
             report.order_hi);
  fmt::print(out, "# L\tdim\tN_R\tground_energy\tmax_abs_diff_prev\tstatus\n");
  for (const auto& e : report.entries) {
    const auto& p = e.point;
    if (p.ok()) {
      fmt::print(out, "{}\t{}\t{}\t{:.15g}\t{:.15g}\tok\n", p.phonon_cutoff, e.dim, p.summary->nr,
                 p.summary->ground_energy, e.max_abs_diff_prev);
    } else {
      fmt::print(out, "{}\t{}\tnan\tnan\tnan\tfailed: {}\n", p.phonon_cutoff, e.dim, p.error);
    }
  }
}

void write_correlation(std::ostream& out, const Eigen::MatrixXd& map) {
  fmt::print(out, "# phonon_site_f\telectron_site_r\tn_fr\n");
  for (Index f = 0; f < map.rows(); ++f) {
    for (Index r = 0; r < map.cols(); ++r) {
      fmt::print(out, "{}\t{}\t{:.15g}\n", f, r, map(f, r));
    }
  }
}

}  // namespace polaron
