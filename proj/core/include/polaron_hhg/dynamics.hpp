#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "polaron_hhg/hilbert.hpp"
#include "polaron_hhg/pulse.hpp"
#include "polaron_hhg/spectral.hpp"

namespace polaron {

struct PropagationConfig {
  Index n_steps = 1 << 16;
  Index record_stride = 1;
  /// Abort when | ||a||^2 - 1 | exceeds this at any step.
  double norm_tolerance = 1e-4;
  /// Required: dt * max|e_m - e_gs| <= stability_limit.
  double stability_limit = 0.1;

  void validate() const;
};

/// Site-resolved occupation operators rotated into the retained eigenbasis.
struct Observables {
  std::vector<Eigen::MatrixXd> electron_number;
  std::vector<Eigen::MatrixXd> phonon_number;
};

Observables make_observables(const EigenBasis& eig, const BasisIndex& basis);

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> field;
  std::vector<double> norm;    // ||a||^2
  std::vector<double> dipole;  // <x_e>
  Eigen::MatrixXd electron_density;  // samples x 2N; empty without observables
  Eigen::MatrixXd phonon_density;
  double sample_dt = 0.0;
  Eigen::VectorXcd final_amplitudes;

  Index samples() const noexcept { return static_cast<Index>(times.size()); }
};

/// -i (e .* a + E(t) T a)
Eigen::VectorXcd rhs(const Eigen::VectorXcd& a, double t, const EigenBasis& eig,
                     const LaserParams& laser);

/// Re(a^dagger O a); throws HermiticityError if the imaginary part is not roundoff.
double density_expectation(const Eigen::VectorXcd& a, const Eigen::MatrixXd& rotated_op);

/// Fixed-step classic RK4 over [0, t_final]. Starts from the ground state
/// unless `initial` is given (must be normalized).
TimeSeries propagate(const EigenBasis& eig, const LaserParams& laser, const PropagationConfig& cfg,
                     const Observables& observables = {},
                     const std::optional<Eigen::VectorXcd>& initial = std::nullopt);

/// Columns: t, E(t), dipole, norm, 2N electron densities, 2N phonon densities.
void write_time_series(std::ostream& out, const TimeSeries& series);

}  // namespace polaron
