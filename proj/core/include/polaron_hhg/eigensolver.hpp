#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "polaron_hhg/operators.hpp"

namespace polaron {

/// Lowest eigenpairs of a real symmetric operator, ascending.
struct EigenPairs {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;  // one column per eigenpair, unit norm

  Index count() const noexcept { return energies.size(); }
};

struct EigensolverOptions {
  /// Dense diagonalization up to this dimension, Lanczos above it.
  Index dense_threshold = 5000;
  /// Lanczos stops when every wanted Ritz pair has
  /// ||H y - theta y|| <= tolerance * max(1, |theta|).
  double tolerance = 1e-10;
  int max_restarts = 5000;
  /// Krylov subspace size; 0 picks max(2*count + 24, count + 48).
  Index krylov_dim = 0;
  std::uint64_t seed = 0x5eed;
};

EigenPairs dense_lowest(const SparseOperator& h, Index count);

/// Thick-restart Lanczos with full reorthogonalization.
/// Throws ConvergenceError carrying the residual norms when max_restarts is hit.
EigenPairs lanczos_lowest(const SparseOperator& h, Index count,
                          const EigensolverOptions& options = {});

/// Dispatches to dense or Lanczos by dimension, then fixes the sign of
/// each vector so its largest-magnitude component is positive.
EigenPairs eigensolve_lowest(const SparseOperator& h, Index count,
                             const EigensolverOptions& options = {});

/// ||H v_k - e_k v_k|| for every pair.
Eigen::VectorXd residual_norms(const SparseOperator& h, const EigenPairs& pairs);

void fix_phases(EigenPairs& pairs);

}  // namespace polaron
