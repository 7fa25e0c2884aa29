#include "polaron_hhg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "polaron_hhg/errors.hpp"

namespace polaron {

Eigen::MatrixXd rotate_operator(const Eigen::MatrixXd& vectors, const SparseOperator& op) {
  if (vectors.rows() != op.dim()) {
    throw DimensionMismatchError(fmt::format(
        "rotate_operator: vectors have length {}, operator dimension {}", vectors.rows(), op.dim()));
  }
  const Eigen::MatrixXd applied = op * vectors;
  Eigen::MatrixXd rotated = vectors.transpose() * applied;
  // Symmetrize away the roundoff of the two triangles.
  return 0.5 * (rotated + rotated.transpose());
}

Eigen::MatrixXd transition_matrix(const EigenPairs& pairs, const SparseOperator& x) {
  return rotate_operator(pairs.vectors, x);
}

EigenBasis make_eigen_basis(EigenPairs pairs, const SparseOperator& x) {
  if (pairs.count() == 0) throw InvalidParameterError("make_eigen_basis: no eigenpairs");
  EigenBasis basis;
  basis.transition = transition_matrix(pairs, x);
  basis.gs_transition = basis.transition.row(0).transpose();
  basis.degenerate_ground = pairs.count() > 1 && pairs.energies[1] - pairs.energies[0] < 1e-9;
  basis.energies = std::move(pairs.energies);
  basis.vectors = std::move(pairs.vectors);
  return basis;
}

Index select_nr(std::span<const double> energies, double omega_l, double max_order,
                std::optional<Index> override_count, Index min_states) {
  const auto available = static_cast<Index>(energies.size());
  if (available == 0) return 0;
  if (override_count) return std::clamp<Index>(*override_count, 1, available);
  Index nr = available;
  for (Index k = 0; k < available; ++k) {
    if (harmonic_order(energies[k], energies[0], omega_l) >= max_order) {
      nr = k + 1;
      break;
    }
  }
  return std::clamp<Index>(std::max(nr, min_states), 1, available);
}

EigenBasis solve_truncated_basis(const SparseOperator& h, const SparseOperator& x, double omega_l,
                                 const TruncationOptions& options) {
  if (!(omega_l > 0.0)) throw InvalidParameterError("omega_l must be > 0");
  const Index dim = h.dim();
  Index request = options.nr_override
                      ? std::clamp<Index>(*options.nr_override, 1, dim)
                      : std::min(dim, std::max<Index>(options.min_states, 64));
  while (true) {
    EigenPairs pairs = eigensolve_lowest(h, request, options.solver);
    const std::span<const double> energies(pairs.energies.data(),
                                           static_cast<std::size_t>(pairs.count()));
    const double last_order = harmonic_order(energies.back(), energies.front(), omega_l);
    if (options.nr_override || last_order >= options.max_order || request == dim) {
      const Index nr = select_nr(energies, omega_l, options.max_order, options.nr_override,
                                 options.min_states);
      pairs.energies.conservativeResize(nr);
      pairs.vectors.conservativeResize(Eigen::NoChange, nr);
      return make_eigen_basis(std::move(pairs), x);
    }
    request = std::min(dim, 2 * request);
  }
}

std::vector<StateRelevance> state_relevance(const EigenBasis& basis, double omega_l) {
  std::vector<StateRelevance> out;
  out.reserve(static_cast<std::size_t>(basis.size()));
  const double gs = basis.ground_energy();
  for (Index m = 0; m < basis.size(); ++m) {
    const double t = basis.gs_transition[m];
    const double t2 = t * t;
    out.push_back({m, basis.energies[m], harmonic_order(basis.energies[m], gs, omega_l),
                   t2 > 0.0 ? std::log10(t2) : -std::numeric_limits<double>::infinity()});
  }
  return out;
}

std::vector<Index> most_relevant_states(std::span<const StateRelevance> relevance,
                                        std::size_t how_many, double max_order) {
  std::vector<StateRelevance> candidates;
  for (const auto& s : relevance) {
    if (s.index >= 1 && s.order <= max_order) candidates.push_back(s);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.log10_tgs2 > b.log10_tgs2; });
  std::vector<Index> out;
  for (std::size_t i = 0; i < std::min(how_many, candidates.size()); ++i) {
    out.push_back(candidates[i].index);
  }
  return out;
}

void write_energy_levels(std::ostream& out, std::span<const StateRelevance> relevance) {
  fmt::print(out, "# index\tenergy\tharmonic_order\tlog10_Tgs2\n");
  for (const auto& s : relevance) {
    fmt::print(out, "{}\t{:.15g}\t{:.15g}\t{:.15g}\n", s.index, s.energy, s.order, s.log10_tgs2);
  }
}

}  // namespace polaron
