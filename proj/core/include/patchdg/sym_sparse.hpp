// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "patchdg/error.hpp"

namespace patchdg {

/// Symmetric sparse matrix storing only the lower triangle (row >= col), so the
/// represented operator is exactly symmetric.
class SymSparseMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;

  SymSparseMatrix() = default;
  explicit SymSparseMatrix(Storage lower);

  Index size() const noexcept { return lower_.rows(); }
  Index stored_nonzeros() const noexcept { return lower_.nonZeros(); }
  const Storage& lower() const noexcept { return lower_; }

  double coeff(Index i, Index j) const;
  Storage full() const;
  Eigen::MatrixXd dense() const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  double quadratic_form(const Eigen::VectorXd& x) const;
  double bilinear_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// Symmetric permutation P A P^T with new index perm[i] for old index i.
  SymSparseMatrix permuted(const std::vector<Index>& perm) const;

  /// Every nonzero of the full matrix as "row col value", 0-based, one per line.
  void write_coordinate(std::ostream& os) const;

 private:
  Storage lower_;
};

/// Accumulates dense local blocks into lower-triangular triplets. Duplicates
/// are summed in insertion order, so a fixed traversal gives bitwise
/// reproducible matrices.
class SymSparseBuilder {
 public:
  explicit SymSparseBuilder(Index n) : n_(n) {}

  void add(std::span<const Index> dofs, const Eigen::MatrixXd& local);
  void add_entry(Index row, Index col, double value);
  SymSparseMatrix build() const;

 private:
  Index n_;
  std::vector<Eigen::Triplet<double, Index>> triplets_;
};

}  // namespace patchdg
