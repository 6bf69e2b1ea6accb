// SPDX-License-Identifier: Apache-2.0
#include "patchdg/sym_sparse.hpp"

#include "patchdg/csv.hpp"

namespace patchdg {

SymSparseMatrix::SymSparseMatrix(Storage lower) : lower_(std::move(lower)) {
  if (lower_.rows() != lower_.cols()) throw Error(Errc::InvalidArgument, "symmetric matrix must be square");
  lower_.makeCompressed();
}

double SymSparseMatrix::coeff(Index i, Index j) const { return i >= j ? lower_.coeff(i, j) : lower_.coeff(j, i); }

SymSparseMatrix::Storage SymSparseMatrix::full() const {
  Storage strict = lower_.triangularView<Eigen::StrictlyLower>();
  Storage out = lower_;
  out += Storage(strict.transpose());
  out.makeCompressed();
  return out;
}

Eigen::MatrixXd SymSparseMatrix::dense() const { return Eigen::MatrixXd(full()); }

Eigen::VectorXd SymSparseMatrix::multiply(const Eigen::VectorXd& x) const {
  return lower_.selfadjointView<Eigen::Lower>() * x;
}

double SymSparseMatrix::quadratic_form(const Eigen::VectorXd& x) const { return x.dot(multiply(x)); }

double SymSparseMatrix::bilinear_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  return x.dot(multiply(y));
}

SymSparseMatrix SymSparseMatrix::permuted(const std::vector<Index>& perm) const {
  SymSparseBuilder b(size());
  for (Index c = 0; c < lower_.outerSize(); ++c)
    for (Storage::InnerIterator it(lower_, c); it; ++it) b.add_entry(perm[it.row()], perm[it.col()], it.value());
  return b.build();
}

void SymSparseMatrix::write_coordinate(std::ostream& os) const {
  const Storage f = full();
  for (Index c = 0; c < f.outerSize(); ++c)
    for (Storage::InnerIterator it(f, c); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << format_exact(it.value()) << '\n';
}

void SymSparseBuilder::add(std::span<const Index> dofs, const Eigen::MatrixXd& local) {
  for (std::size_t a = 0; a < dofs.size(); ++a)
    for (std::size_t b = 0; b < dofs.size(); ++b)
      if (dofs[a] >= dofs[b])
        triplets_.emplace_back(dofs[a], dofs[b], local(static_cast<Index>(a), static_cast<Index>(b)));
}

void SymSparseBuilder::add_entry(Index row, Index col, double value) {
  if (row >= col)
    triplets_.emplace_back(row, col, value);
  else
    triplets_.emplace_back(col, row, value);
}

SymSparseMatrix SymSparseBuilder::build() const {
  SymSparseMatrix::Storage m(n_, n_);
  m.setFromTriplets(triplets_.begin(), triplets_.end());
  return SymSparseMatrix(std::move(m));
}

}  // namespace patchdg
