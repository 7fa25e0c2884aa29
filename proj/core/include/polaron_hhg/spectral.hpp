#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "polaron_hhg/eigensolver.hpp"
#include "polaron_hhg/operators.hpp"

namespace polaron {

/// Retained field-free eigenstates plus the dipole transition matrix
/// T_mn = <phi_m| x |phi_n>. Index 0 is the ground state.
struct EigenBasis {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
  Eigen::MatrixXd transition;
  Eigen::VectorXd gs_transition;
  /// Set when e_1 - e_0 < 1e-9: the ground state is then solver-order dependent.
  bool degenerate_ground = false;

  Index size() const noexcept { return energies.size(); }
  double ground_energy() const { return energies[0]; }
};

Eigen::MatrixXd transition_matrix(const EigenPairs& pairs, const SparseOperator& x);

/// Builds T and the ground-state row from already computed pairs.
EigenBasis make_eigen_basis(EigenPairs pairs, const SparseOperator& x);

/// V^T O V for the retained vectors, symmetrized.
Eigen::MatrixXd rotate_operator(const Eigen::MatrixXd& vectors, const SparseOperator& op);

inline double harmonic_order(double energy, double ground_energy, double omega_l) {
  return (energy - ground_energy) / omega_l;
}

/// Smallest N_R with harmonic_order(e[N_R-1]) >= max_order, raised to at
/// least `min_states` and clamped to the available count. An override wins
/// (still clamped).
Index select_nr(std::span<const double> energies, double omega_l, double max_order,
                std::optional<Index> override_count = std::nullopt, Index min_states = 1);

struct TruncationOptions {
  double max_order = 45.0;
  std::optional<Index> nr_override;
  /// Floor on N_R; the pipeline passes the electronic band size 2N.
  Index min_states = 1;
  EigensolverOptions solver;
};

/// Solves for enough low-lying states to satisfy select_nr, growing the
/// requested count geometrically when the window is not yet covered.
EigenBasis solve_truncated_basis(const SparseOperator& h, const SparseOperator& x, double omega_l,
                                 const TruncationOptions& options);

struct StateRelevance {
  Index index;
  double energy;
  double order;
  double log10_tgs2;  // -infinity when T_gs,m == 0
};

std::vector<StateRelevance> state_relevance(const EigenBasis& basis, double omega_l);

/// Indices of the `how_many` excited states (m >= 1, order <= max_order)
/// with the largest T_gs,m^2, strongest first.
std::vector<Index> most_relevant_states(std::span<const StateRelevance> relevance,
                                        std::size_t how_many, double max_order);

/// "index<TAB>energy<TAB>harmonic_order<TAB>log10_Tgs2" rows.
void write_energy_levels(std::ostream& out, std::span<const StateRelevance> relevance);

}  // namespace polaron
