#include "polaron_hhg/dynamics.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "polaron_hhg/errors.hpp"
#include "polaron_hhg/operators.hpp"

namespace polaron {

void PropagationConfig::validate() const {
  if (n_steps < 2) throw InvalidParameterError("n_steps: need at least 2 steps");
  if (record_stride < 1) throw InvalidParameterError("record_stride: must be >= 1");
  if (n_steps % record_stride != 0) {
    throw InvalidParameterError("record_stride: must divide n_steps");
  }
  if (!(norm_tolerance > 0.0)) throw InvalidParameterError("norm_tolerance: must be > 0");
  if (!(stability_limit > 0.0)) throw InvalidParameterError("stability_limit: must be > 0");
}

Observables make_observables(const EigenBasis& eig, const BasisIndex& basis) {
  if (eig.vectors.rows() != basis.dim()) {
    throw DimensionMismatchError("make_observables: eigenvectors do not match the basis");
  }
  Observables obs;
  for (int site = 0; site < basis.n_sites(); ++site) {
    obs.electron_number.push_back(rotate_operator(eig.vectors, build_number_electron(site, basis)));
    obs.phonon_number.push_back(rotate_operator(eig.vectors, build_number_phonon(site, basis)));
  }
  return obs;
}

Eigen::VectorXcd rhs(const Eigen::VectorXcd& a, double t, const EigenBasis& eig,
                     const LaserParams& laser) {
  if (a.size() != eig.size()) {
    throw DimensionMismatchError(
        fmt::format("rhs: amplitude length {} vs basis size {}", a.size(), eig.size()));
  }
  const double field = electric_field(t, laser);
  const Eigen::VectorXcd coupled = eig.transition.cast<std::complex<double>>() * a;
  const Eigen::VectorXcd h_a = eig.energies.cast<std::complex<double>>().cwiseProduct(a) + field * coupled;
  return std::complex<double>(0.0, -1.0) * h_a;
}

double density_expectation(const Eigen::VectorXcd& a, const Eigen::MatrixXd& rotated_op) {
  if (rotated_op.rows() != a.size() || rotated_op.cols() != a.size()) {
    throw DimensionMismatchError("density_expectation: operator does not match amplitude length");
  }
  const std::complex<double> value = a.dot(rotated_op.cast<std::complex<double>>() * a);
  if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real()))) {
    throw HermiticityError(
        fmt::format("density_expectation: imaginary residue {:.3e}", value.imag()));
  }
  return value.real();
}

namespace {

// Amplitudes are held as an N_R x 2 real block [Re a, Im a] so that the real
// symmetric T acts on both parts in one product.
using Block = Eigen::Matrix<double, Eigen::Dynamic, 2>;

double quadratic_form(const Block& z, const Eigen::MatrixXd& op, Block& scratch) {
  scratch.noalias() = op * z;
  return z.col(0).dot(scratch.col(0)) + z.col(1).dot(scratch.col(1));
}

}  // namespace

TimeSeries propagate(const EigenBasis& eig, const LaserParams& laser, const PropagationConfig& cfg,
                     const Observables& observables,
                     const std::optional<Eigen::VectorXcd>& initial) {
  cfg.validate();
  laser.validate();
  const Index nr = eig.size();
  if (nr < 1 || eig.transition.rows() != nr || eig.transition.cols() != nr) {
    throw DimensionMismatchError("propagate: transition matrix does not match the energies");
  }
  const double dt = laser.t_final() / static_cast<double>(cfg.n_steps);
  const double spread = (eig.energies.array() - eig.energies[0]).abs().maxCoeff();
  if (dt * spread > cfg.stability_limit) {
    throw InvalidParameterError(fmt::format(
        "n_steps: dt * max|e_m - e_gs| = {:.3g} exceeds the stability limit {:.3g}", dt * spread,
        cfg.stability_limit));
  }

  Block z = Block::Zero(nr, 2);
  if (initial) {
    if (initial->size() != nr) {
      throw DimensionMismatchError("propagate: initial amplitudes do not match the basis size");
    }
    z.col(0) = initial->real();
    z.col(1) = initial->imag();
    if (std::abs(z.squaredNorm() - 1.0) > 1e-12) {
      throw InvalidParameterError("propagate: initial amplitudes must be normalized");
    }
  } else {
    z(0, 0) = 1.0;
  }

  const auto n_sites = static_cast<Index>(observables.electron_number.size());
  const Index n_samples = cfg.n_steps / cfg.record_stride + 1;
  TimeSeries out;
  out.sample_dt = dt * static_cast<double>(cfg.record_stride);
  out.times.reserve(n_samples);
  out.field.reserve(n_samples);
  out.norm.reserve(n_samples);
  out.dipole.reserve(n_samples);
  out.electron_density.resize(n_samples, n_sites);
  out.phonon_density.resize(n_samples, n_sites);

  // Energies are measured from the ground state. This only changes the global
  // phase, but keeps the RK4 phase error independent of the zero-point offset.
  const Eigen::VectorXd energies = eig.energies.array() - eig.energies[0];
  const Eigen::MatrixXd& transition = eig.transition;
  Block scratch(nr, 2);
  Block coupled(nr, 2);

  // dz/dt for a' = -i M a with M = diag(e) + E(t) T real symmetric.
  auto derivative = [&](const Block& at, double t, Block& d) {
    coupled.noalias() = transition * at;
    const double field = electric_field(t, laser);
    d.col(0) = energies.cwiseProduct(at.col(1)) + field * coupled.col(1);
    d.col(1) = -(energies.cwiseProduct(at.col(0)) + field * coupled.col(0));
  };

  auto record = [&](double t) {
    const Index row = static_cast<Index>(out.times.size());
    out.times.push_back(t);
    out.field.push_back(electric_field(t, laser));
    out.norm.push_back(z.squaredNorm());
    out.dipole.push_back(quadratic_form(z, transition, scratch));
    for (Index s = 0; s < n_sites; ++s) {
      out.electron_density(row, s) = quadratic_form(z, observables.electron_number[s], scratch);
      out.phonon_density(row, s) = quadratic_form(z, observables.phonon_number[s], scratch);
    }
  };

  Block k1(nr, 2), k2(nr, 2), k3(nr, 2), k4(nr, 2), stage(nr, 2);
  record(0.0);
  for (Index step = 0; step < cfg.n_steps; ++step) {
    const double t = dt * static_cast<double>(step);
    derivative(z, t, k1);
    stage = z + (0.5 * dt) * k1;
    derivative(stage, t + 0.5 * dt, k2);
    stage = z + (0.5 * dt) * k2;
    derivative(stage, t + 0.5 * dt, k3);
    stage = z + dt * k3;
    derivative(stage, t + dt, k4);
    z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double norm = z.squaredNorm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > cfg.norm_tolerance) {
      throw PropagationDivergedError(
          fmt::format("propagate: norm drifted to {:.6g} at t={:.6g}; reduce dt or enlarge N_R", norm,
                      t + dt),
          t + dt, norm);
    }
    if ((step + 1) % cfg.record_stride == 0) record(dt * static_cast<double>(step + 1));
  }

  out.final_amplitudes.resize(nr);
  out.final_amplitudes.real() = z.col(0);
  out.final_amplitudes.imag() = z.col(1);
  return out;
}

void write_time_series(std::ostream& out, const TimeSeries& series) {
  const Index sites = series.electron_density.cols();
  fmt::print(out, "# t\tE\tdipole\tnorm");
  for (Index s = 0; s < sites; ++s) fmt::print(out, "\tn_e_{}", s);
  for (Index s = 0; s < sites; ++s) fmt::print(out, "\tn_ph_{}", s);
  fmt::print(out, "\n");
  for (Index i = 0; i < series.samples(); ++i) {
    fmt::print(out, "{:.15g}\t{:.15g}\t{:.15g}\t{:.15g}", series.times[i], series.field[i],
               series.dipole[i], series.norm[i]);
    for (Index s = 0; s < sites; ++s) fmt::print(out, "\t{:.15g}", series.electron_density(i, s));
    for (Index s = 0; s < sites; ++s) fmt::print(out, "\t{:.15g}", series.phonon_density(i, s));
    fmt::print(out, "\n");
  }
}

}  // namespace polaron
