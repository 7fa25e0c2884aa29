#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "polaron_hhg/dynamics.hpp"
#include "polaron_hhg/errors.hpp"
#include "polaron_hhg/spectrum.hpp"

namespace polaron {

/// A pipeline failure tagged with the parameter point that produced it.
/// The original error is nested (std::rethrow_if_nested).
class PointError : public Error {
 public:
  using Error::Error;
};

struct PipelineOptions {
  TruncationOptions truncation;
  PropagationConfig propagation;
  /// Keep the site-basis eigenvectors in the result (needed for correlation maps).
  bool keep_eigenbasis = false;
};

struct PointSummary {
  Index dim = 0;
  Index nr = 0;
  double ground_energy = 0.0;
  bool degenerate_ground = false;
  std::vector<StateRelevance> relevance;
};

struct PointResult {
  PointSummary summary;
  TimeSeries series;
  SpectrumResult spectrum;
  std::shared_ptr<const EigenBasis> eigenbasis;  // only with keep_eigenbasis
};

/// Hamiltonian -> truncated eigenbasis -> RK4 -> spectrum. Unless
/// overridden, N_R is never below the electronic band size 2N.
PointResult run_point(const ModelParams& model, const LaserParams& laser,
                      const PipelineOptions& options);

/// 26 evenly spaced couplings from -0.05 to 0.
std::vector<double> default_gamma_grid();

struct ScanSpec {
  std::vector<double> gamma_values = default_gamma_grid();
  std::vector<int> l_values = {1, 3, 5, 6};
  ModelParams model;
  LaserParams laser;
  PipelineOptions options;
  int workers = 1;
};

/// One grid point of a scan: either a summary and spectrum, or an error.
struct ScanPoint {
  double gamma = 0.0;
  int phonon_cutoff = 0;
  std::optional<PointSummary> summary;
  std::optional<SpectrumResult> spectrum;
  std::string error;

  bool ok() const noexcept { return summary.has_value(); }
};

struct GammaScanResult {
  std::vector<ScanPoint> points;  // in gamma_values order
};

/// Runs every coupling in spec.gamma_values at spec.model's cutoff. Failing
/// points are recorded and the scan continues.
GammaScanResult gamma_scan(const ScanSpec& spec);

struct ConvergenceEntry {
  ScanPoint point;
  Index dim = 0;
  /// max |Y_N(L) - Y_N(previous L)| over the comparison window; NaN for the first entry.
  double max_abs_diff_prev = 0.0;
};

struct ConvergenceReport {
  double order_lo = 2.0;
  double order_hi = 40.0;
  std::vector<ConvergenceEntry> entries;
};

/// Runs spec.l_values (ascending) at spec.model's coupling.
ConvergenceReport convergence_study(const ScanSpec& spec);

/// n_{f,r} = <phi_m| n_ph,f n_e,r |phi_m>; rows are phonon sites f, columns electron sites r.
Eigen::MatrixXd correlation_map(const EigenBasis& eig, Index state, const BasisIndex& basis);

void write_heatmap(std::ostream& out, const GammaScanResult& scan, double max_order);
void write_relevance(std::ostream& out, const GammaScanResult& scan);
void write_scan_failures(std::ostream& out, const GammaScanResult& scan);
void write_convergence(std::ostream& out, const ConvergenceReport& report);
void write_correlation(std::ostream& out, const Eigen::MatrixXd& map);

/// Runs task(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

}  // namespace polaron
