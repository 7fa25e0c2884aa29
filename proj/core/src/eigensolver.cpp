#include "polaron_hhg/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <lapacke.h>

#include "polaron_hhg/errors.hpp"

namespace polaron {

namespace {

void check_count(const SparseOperator& h, Index count, const char* who) {
  if (count < 1 || count > h.dim()) {
    throw InvalidParameterError(
        fmt::format("{}: requested {} eigenpairs from dimension {}", who, count, h.dim()));
  }
}

// Two passes of classical Gram-Schmidt against the first `cols` columns of
// `basis`; returns the accumulated projection coefficients.
Eigen::VectorXd orthogonalize(const Eigen::MatrixXd& basis, Index cols, Eigen::VectorXd& w) {
  const auto q = basis.leftCols(cols);
  Eigen::VectorXd coeffs = q.transpose() * w;
  w.noalias() -= q * coeffs;
  const Eigen::VectorXd again = q.transpose() * w;
  w.noalias() -= q * again;
  coeffs += again;
  return coeffs;
}

}  // namespace

EigenPairs dense_lowest(const SparseOperator& h, Index count) {
  check_count(h, count, "dense_lowest");
  const Index n = h.dim();
  if (n > std::numeric_limits<lapack_int>::max() / std::max<Index>(n, 1)) {
    throw DimensionOverflowError(fmt::format("dense_lowest: dimension {} too large", n));
  }
  Eigen::MatrixXd a = h.to_dense();
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const auto ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', ln, a.data(), ln, 0.0, 0.0,
                                         1, static_cast<lapack_int>(count), 0.0, &found,
                                         values.data(), vectors.data(), ln, support.data());
  if (info != 0 || found != count) {
    throw ConvergenceError(
        fmt::format("dense_lowest: dsyevr failed (info={}, found={} of {})", info, found, count),
        {});
  }
  return {values.head(count), std::move(vectors)};
}

EigenPairs lanczos_lowest(const SparseOperator& h, Index count, const EigensolverOptions& options) {
  check_count(h, count, "lanczos_lowest");
  const Index n = h.dim();
  Index m = options.krylov_dim > 0 ? options.krylov_dim
                                   : std::max<Index>(2 * count + 24, count + 48);
  m = std::min(m, n);
  if (m <= count && m < n) m = std::min(n, count + 1);
  const Index keep = std::min<Index>(m - 1, count + (m - count) / 2);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  auto random_unit = [&](const Eigen::MatrixXd& basis, Index cols) {
    Eigen::VectorXd r(n);
    for (Index i = 0; i < n; ++i) r[i] = gauss(rng);
    if (cols > 0) orthogonalize(basis, cols, r);
    r.normalize();
    return r;
  };

  Eigen::MatrixXd v(n, m + 1);
  Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(m, m);
  v.col(0) = random_unit(v, 0);
  Eigen::VectorXd w(n);

  Index kept = 0;
  std::vector<double> residuals(static_cast<std::size_t>(count));
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    double beta = 0.0;
    for (Index j = kept; j < m; ++j) {
      h.apply(v.col(j), w);
      const Eigen::VectorXd coeffs = orthogonalize(v, j + 1, w);
      projected.col(j).head(j + 1) = coeffs;
      projected.row(j).head(j + 1) = coeffs.transpose();
      beta = w.norm();
      const double scale = std::max(1.0, projected.col(j).head(j + 1).cwiseAbs().maxCoeff());
      if (beta <= 1e-13 * scale) {
        // Invariant subspace: continue with a fresh direction, zero coupling.
        beta = 0.0;
        if (j + 1 < n) v.col(j + 1) = random_unit(v, j + 1);
        else v.col(j + 1).setZero();
      } else {
        v.col(j + 1) = w / beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(projected);
    const Eigen::VectorXd& theta = ritz.eigenvalues();
    const Eigen::MatrixXd& y = ritz.eigenvectors();

    bool converged = true;
    for (Index i = 0; i < count; ++i) {
      residuals[i] = std::abs(beta * y(m - 1, i));
      if (residuals[i] > options.tolerance * std::max(1.0, std::abs(theta[i]))) converged = false;
    }
    if (converged || m == n) {
      EigenPairs out;
      out.energies = theta.head(count);
      out.vectors = v.leftCols(m) * y.leftCols(count);
      for (Index i = 0; i < count; ++i) out.vectors.col(i).normalize();
      return out;
    }

    // Thick restart: keep the lowest `keep` Ritz vectors plus the residual direction.
    const Eigen::MatrixXd ritz_vectors = v.leftCols(m) * y.leftCols(keep);
    v.col(keep) = v.col(m);
    v.leftCols(keep) = ritz_vectors;
    projected.setZero();
    projected.diagonal().head(keep) = theta.head(keep);
    kept = keep;
  }
  throw ConvergenceError(
      fmt::format("lanczos_lowest: {} eigenpairs did not converge within {} restarts", count,
                  options.max_restarts),
      residuals);
}

void fix_phases(EigenPairs& pairs) {
  for (Index k = 0; k < pairs.vectors.cols(); ++k) {
    Index at = 0;
    pairs.vectors.col(k).cwiseAbs().maxCoeff(&at);
    if (pairs.vectors(at, k) < 0.0) pairs.vectors.col(k) *= -1.0;
  }
}

EigenPairs eigensolve_lowest(const SparseOperator& h, Index count,
                             const EigensolverOptions& options) {
  check_count(h, count, "eigensolve_lowest");
  EigenPairs pairs =
      h.dim() <= options.dense_threshold ? dense_lowest(h, count) : lanczos_lowest(h, count, options);
  fix_phases(pairs);
  return pairs;
}

Eigen::VectorXd residual_norms(const SparseOperator& h, const EigenPairs& pairs) {
  Eigen::VectorXd out(pairs.count());
  Eigen::VectorXd hv(h.dim());
  for (Index k = 0; k < pairs.count(); ++k) {
    h.apply(pairs.vectors.col(k), hv);
    out[k] = (hv - pairs.energies[k] * pairs.vectors.col(k)).norm();
  }
  return out;
}

}  // namespace polaron
