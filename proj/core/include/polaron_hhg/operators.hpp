#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "polaron_hhg/hilbert.hpp"

namespace polaron {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Real symmetric operator in the site basis, stored as a fully materialized
/// row-major CSR matrix (both triangles).
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;

  SparseOperator() = default;

  /// Duplicate coordinates are summed and exact zeros dropped.
  SparseOperator(Index dim, std::span<const Triplet> entries);

  static SparseOperator diagonal(std::span<const double> values);

  Index dim() const noexcept { return matrix_.rows(); }
  Index nnz() const noexcept { return matrix_.nonZeros(); }
  double value(Index row, Index col) const;

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const { return matrix_ * x; }
  Eigen::MatrixXd operator*(const Eigen::MatrixXd& x) const { return matrix_ * x; }

  /// y = A x without allocating.
  void apply(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> y) const;

  /// Exact (bitwise) check of value(i,j) == value(j,i).
  bool is_symmetric() const;
  Index max_row_degree() const;

  Eigen::MatrixXd to_dense() const;
  std::vector<Triplet> entries() const;
  const Matrix& matrix() const noexcept { return matrix_; }

  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);

 private:
  explicit SparseOperator(Matrix m) : matrix_(std::move(m)) {}

  Matrix matrix_;
};

// Field-free Holstein-SSH terms. The chain has open ends: bonds are
// (2k, 2k+1) with amplitude v and (2k+1, 2k+2) with amplitude w.
SparseOperator build_h_electron(const BasisIndex& basis);
SparseOperator build_h_phonon(const BasisIndex& basis);
SparseOperator build_h_eph(const BasisIndex& basis);
SparseOperator build_hamiltonian(const BasisIndex& basis);

/// Diagonal dipole operator d * (r - (2N-1)/2).
SparseOperator build_position(const BasisIndex& basis);

/// Projector onto the electron sitting at `site`.
SparseOperator build_number_electron(int site, const BasisIndex& basis);
/// Phonon occupation n_f at `site`.
SparseOperator build_number_phonon(int site, const BasisIndex& basis);

/// One "row<TAB>col<TAB>value" line per stored entry, 17 significant digits.
void write_coordinate_list(std::ostream& out, const SparseOperator& op);

}  // namespace polaron
