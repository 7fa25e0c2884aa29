#include "polaron_hhg/operators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "polaron_hhg/errors.hpp"

namespace polaron {

SparseOperator::SparseOperator(Index dim, std::span<const Triplet> entries) : matrix_(dim, dim) {
  std::vector<Eigen::Triplet<double, Index>> trips;
  trips.reserve(entries.size());
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim) {
      throw IndexOutOfRangeError(
          fmt::format("SparseOperator: entry ({}, {}) outside dimension {}", t.row, t.col, dim));
    }
    trips.emplace_back(t.row, t.col, t.value);
  }
  matrix_.setFromTriplets(trips.begin(), trips.end());
  matrix_.prune(0.0, 0.0);
  matrix_.makeCompressed();
}

SparseOperator SparseOperator::diagonal(std::span<const double> values) {
  std::vector<Triplet> entries;
  entries.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    entries.push_back({static_cast<Index>(i), static_cast<Index>(i), values[i]});
  }
  return SparseOperator(static_cast<Index>(values.size()), entries);
}

double SparseOperator::value(Index row, Index col) const {
  if (row < 0 || row >= dim() || col < 0 || col >= dim()) {
    throw IndexOutOfRangeError(fmt::format("value: ({}, {}) outside dimension {}", row, col, dim()));
  }
  return matrix_.coeff(row, col);
}

void SparseOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& x,
                           Eigen::Ref<Eigen::VectorXd> y) const {
  if (x.size() != dim() || y.size() != dim()) {
    throw DimensionMismatchError("SparseOperator::apply: vector length does not match dimension");
  }
  y.noalias() = matrix_ * x;
}

bool SparseOperator::is_symmetric() const {
  for (Index i = 0; i < matrix_.outerSize(); ++i) {
    for (Matrix::InnerIterator it(matrix_, i); it; ++it) {
      if (matrix_.coeff(it.col(), it.row()) != it.value()) return false;
    }
  }
  return true;
}

Index SparseOperator::max_row_degree() const {
  Index degree = 0;
  for (Index i = 0; i < matrix_.outerSize(); ++i) {
    degree = std::max<Index>(degree, matrix_.outerIndexPtr()[i + 1] - matrix_.outerIndexPtr()[i]);
  }
  return degree;
}

Eigen::MatrixXd SparseOperator::to_dense() const { return Eigen::MatrixXd(matrix_); }

std::vector<Triplet> SparseOperator::entries() const {
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(nnz()));
  for (Index i = 0; i < matrix_.outerSize(); ++i) {
    for (Matrix::InnerIterator it(matrix_, i); it; ++it) {
      out.push_back({it.row(), it.col(), it.value()});
    }
  }
  return out;
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatchError(
        fmt::format("operator+: dimensions {} and {} differ", a.dim(), b.dim()));
  }
  SparseOperator::Matrix sum = a.matrix_ + b.matrix_;
  sum.prune(0.0, 0.0);
  sum.makeCompressed();
  return SparseOperator(std::move(sum));
}

SparseOperator build_h_electron(const BasisIndex& basis) {
  const auto& p = basis.params();
  const int sites = basis.n_sites();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(2 * basis.dim()));
  for (Index s = 0; s < basis.dim(); ++s) {
    const int r = basis.electron_site(s);
    // Electron site is the fastest digit, so r -> r+1 is s -> s+1.
    if (r + 1 < sites) {
      const double amplitude = (r % 2 == 0) ? p.v : p.w;
      entries.push_back({s, s + 1, amplitude});
      entries.push_back({s + 1, s, amplitude});
    }
  }
  return SparseOperator(basis.dim(), entries);
}

SparseOperator build_h_phonon(const BasisIndex& basis) {
  const double omega = basis.params().omega_ph;
  const double zero_point = 0.5 * basis.n_sites();
  std::vector<double> diag(static_cast<std::size_t>(basis.dim()));
  for (Index s = 0; s < basis.dim(); ++s) {
    diag[s] = omega * (basis.total_phonons(s) + zero_point);
  }
  return SparseOperator::diagonal(diag);
}

SparseOperator build_h_eph(const BasisIndex& basis) {
  const double gamma = basis.params().gamma;
  const int cutoff = basis.cutoff();
  std::vector<Triplet> entries;
  if (gamma != 0.0 && cutoff > 1) {
    entries.reserve(static_cast<std::size_t>(2 * basis.dim()));
    for (Index s = 0; s < basis.dim(); ++s) {
      const int r = basis.electron_site(s);
      const int n = basis.occupation(s, r);
      // b^dagger at the electron's site; the lowering term is its transpose.
      if (n + 1 < cutoff) {
        const Index raised = s + basis.phonon_stride(r);
        const double element = gamma * std::sqrt(static_cast<double>(n + 1));
        entries.push_back({raised, s, element});
        entries.push_back({s, raised, element});
      }
    }
  }
  return SparseOperator(basis.dim(), entries);
}

SparseOperator build_hamiltonian(const BasisIndex& basis) {
  return build_h_electron(basis) + build_h_phonon(basis) + build_h_eph(basis);
}

SparseOperator build_position(const BasisIndex& basis) {
  const auto& p = basis.params();
  const double center = 0.5 * (basis.n_sites() - 1);
  std::vector<double> diag(static_cast<std::size_t>(basis.dim()));
  for (Index s = 0; s < basis.dim(); ++s) {
    diag[s] = p.d * (basis.electron_site(s) - center);
  }
  return SparseOperator::diagonal(diag);
}

namespace {

void check_site(int site, const BasisIndex& basis, const char* what) {
  if (site < 0 || site >= basis.n_sites()) {
    throw IndexOutOfRangeError(
        fmt::format("{}: site {} outside [0, {})", what, site, basis.n_sites()));
  }
}

}  // namespace

SparseOperator build_number_electron(int site, const BasisIndex& basis) {
  check_site(site, basis, "build_number_electron");
  std::vector<double> diag(static_cast<std::size_t>(basis.dim()));
  for (Index s = 0; s < basis.dim(); ++s) {
    diag[s] = basis.electron_site(s) == site ? 1.0 : 0.0;
  }
  return SparseOperator::diagonal(diag);
}

SparseOperator build_number_phonon(int site, const BasisIndex& basis) {
  check_site(site, basis, "build_number_phonon");
  std::vector<double> diag(static_cast<std::size_t>(basis.dim()));
  for (Index s = 0; s < basis.dim(); ++s) {
    diag[s] = basis.occupation(s, site);
  }
  return SparseOperator::diagonal(diag);
}

void write_coordinate_list(std::ostream& out, const SparseOperator& op) {
  for (const auto& t : op.entries()) {
    fmt::print(out, "{}\t{}\t{:.17g}\n", t.row, t.col, t.value);
  }
}

}  // namespace polaron
