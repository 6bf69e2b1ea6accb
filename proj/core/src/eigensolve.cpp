// SPDX-License-Identifier: Apache-2.0
#include "patchdg/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace patchdg {

namespace {

using SparseMat = SymSparseMatrix::Storage;

void finish(EigenResult& r) {
  for (Index j = 0; j < r.vectors.cols(); ++j) fix_sign(r.vectors.col(j));
}

double inf_norm(const Eigen::MatrixXd& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

double floor_of(const SymSparseMatrix& abs_a, const Eigen::VectorXd& ax, const Eigen::VectorXd& x) {
  const double d = ax.norm();
  const double f = std::numeric_limits<double>::epsilon() * abs_a.multiply(x.cwiseAbs()).norm();
  return d > 0.0 ? f / d : f;
}

}  // namespace

void fix_sign(Eigen::Ref<Eigen::VectorXd> x) {
  Index imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  if (x(imax) < 0.0) x = -x;
}

double residual_floor(const SymSparseMatrix& a, const Eigen::VectorXd& x) {
  return floor_of(SymSparseMatrix(a.lower().cwiseAbs()), a.multiply(x), x);
}

double relative_residual(const SymSparseMatrix& a, const SymSparseMatrix& m, double lambda, const Eigen::VectorXd& x) {
  const Eigen::VectorXd ax = a.multiply(x);
  const double denom = ax.norm();
  const double num = (ax - lambda * m.multiply(x)).norm();
  return denom > 0.0 ? num / denom : num;
}

bool is_positive_definite(const SymSparseMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.dense());
  return llt.info() == Eigen::Success;
}

EigenResult solve_dense(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
  if (a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows())
    throw Error(Errc::InvalidArgument, "solve_dense needs square matrices of equal size");
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw Error(Errc::MassNotSPD, "Cholesky factorization of the mass matrix failed");
  const auto l = llt.matrixL();
  // C = L^-1 A L^-T
  Eigen::MatrixXd c = l.solve(a);
  c = l.solve(c.transpose()).eval();
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.info() != Eigen::Success) throw Error(Errc::NoConvergence, "dense symmetric eigensolver did not converge");

  EigenResult r;
  r.values = es.eigenvalues();
  if (r.values.size() > 0 && r.values(0) <= -1e-8 * inf_norm(a))
    throw Error(Errc::PenaltyTooSmall,
                "stiffness matrix is indefinite (lambda_min = " + std::to_string(r.values(0)) + ")");
  r.vectors = llt.matrixU().solve(es.eigenvectors());
  const Eigen::MatrixXd ax = a * r.vectors;
  const Eigen::MatrixXd res = ax - m * r.vectors * r.values.asDiagonal();
  const Eigen::MatrixXd abs_ax = a.cwiseAbs() * r.vectors.cwiseAbs();
  r.residuals.resize(r.values.size());
  r.floors.resize(r.values.size());
  for (Index j = 0; j < r.values.size(); ++j) {
    const double d = ax.col(j).norm();
    r.residuals(j) = d > 0.0 ? res.col(j).norm() / d : res.col(j).norm();
    r.floors(j) = std::numeric_limits<double>::epsilon() * (d > 0.0 ? abs_ax.col(j).norm() / d : abs_ax.col(j).norm());
  }
  finish(r);
  return r;
}

EigenResult solve_dense(const SymSparseMatrix& a, const SymSparseMatrix& m) {
  if (a.size() > kDenseThreshold)
    throw Error(Errc::InvalidArgument, "system size " + std::to_string(a.size()) + " exceeds the dense threshold");
  EigenResult r = solve_dense(a.dense(), m.dense());
  const SymSparseMatrix abs_a(a.lower().cwiseAbs());
  for (Index j = 0; j < r.size(); ++j) {
    const Eigen::VectorXd x = r.vectors.col(j);
    r.floors(j) = floor_of(abs_a, a.multiply(x), x);
  }
  return r;
}

EigenResult solve_smallest(const SymSparseMatrix& a, const SymSparseMatrix& m, Index k, const LanczosOptions& opt) {
  const Index n = a.size();
  if (m.size() != n) throw Error(Errc::InvalidArgument, "A and M differ in size");
  if (k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");
  if (!(opt.tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  if (k >= n || n <= 2 * opt.block + 8) {
    EigenResult full = solve_dense(a, m);
    const Index kk = std::min(k, n);
    return {full.values.head(kk), full.vectors.leftCols(kk), full.residuals.head(kk), full.floors.head(kk)};
  }

  Eigen::SimplicialLLT<SparseMat, Eigen::Lower> chol(a.lower());
  if (chol.info() != Eigen::Success)
    throw Error(Errc::StiffnessNotSPD, "sparse Cholesky factorization of the stiffness matrix failed");

  const SymSparseMatrix abs_a(a.lower().cwiseAbs());
  const Index block = std::max(1, opt.block);
  const Index pmax = std::min<Index>(n, opt.subspace > 0 ? opt.subspace : std::max<Index>(2 * k + 2 * block, k + 40));
  const Index keep = std::min<Index>(pmax - block, k + (pmax - k) / 2);
  const int max_restarts = opt.max_restarts > 0 ? opt.max_restarts : static_cast<int>(50 * k);

  Eigen::MatrixXd basis(n, pmax), image(n, pmax);  // V and A^-1 M V
  Index cols = 0;
  auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return chol.solve(m.multiply(v)); };

  // M-orthogonalizes `v` against the basis (twice) and appends it.
  auto append = [&](Eigen::VectorXd v) {
    const double before = std::sqrt(std::max(0.0, v.dot(m.multiply(v))));
    if (!(before > 0.0)) return false;
    for (int pass = 0; pass < 2 && cols > 0; ++pass) {
      const Eigen::VectorXd mv = m.multiply(v);
      v -= basis.leftCols(cols) * (basis.leftCols(cols).transpose() * mv);
    }
    const double after = std::sqrt(std::max(0.0, v.dot(m.multiply(v))));
    if (!(after > 1e-10 * before)) return false;
    v /= after;
    basis.col(cols) = v;
    image.col(cols) = op(v);
    ++cols;
    return true;
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
  };

  for (Index b = 0; b < block; ++b) append(random_vector());
  Index next = 0;  // next basis column whose image seeds a new direction

  EigenResult r;
  for (int restart = 0; restart <= max_restarts; ++restart) {
    while (cols < pmax) {
      if (next < cols) {
        append(image.col(next++));
      } else if (!append(random_vector())) {
        break;
      }
    }

    // Rayleigh-Ritz for the M-self-adjoint operator A^-1 M.
    Eigen::MatrixXd mw(n, cols);
    for (Index j = 0; j < cols; ++j) mw.col(j) = m.multiply(image.col(j));
    Eigen::MatrixXd h = basis.leftCols(cols).transpose() * mw;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    // Largest theta = smallest lambda; eigenvalues come ascending.
    const Eigen::MatrixXd y = es.eigenvectors().rowwise().reverse();
    const Eigen::VectorXd theta = es.eigenvalues().reverse();

    r.values.resize(k);
    r.vectors.resize(n, k);
    r.residuals.resize(k);
    r.floors.resize(k);
    bool converged = true;
    for (Index j = 0; j < k; ++j) {
      if (!(theta(j) > 0.0)) throw Error(Errc::StiffnessNotSPD, "non-positive Ritz value of A^-1 M");
      r.values(j) = 1.0 / theta(j);
      const Eigen::VectorXd x = basis.leftCols(cols) * y.col(j);
      const Eigen::VectorXd ax = a.multiply(x);
      const double d = ax.norm();
      const double num = (ax - r.values(j) * m.multiply(x)).norm();
      r.vectors.col(j) = x;
      r.residuals(j) = d > 0.0 ? num / d : num;
      r.floors(j) = floor_of(abs_a, ax, x);
      converged = converged && r.residuals(j) <= std::max(opt.tol, kFloorFactor * r.floors(j));
    }
    if (converged) {
      finish(r);
      return r;
    }

    // Thick restart: keep the leading Ritz vectors; their images follow by linearity.
    const Index l = std::min(keep, cols);
    const Eigen::MatrixXd new_basis = basis.leftCols(cols) * y.leftCols(l);
    const Eigen::MatrixXd new_image = image.leftCols(cols) * y.leftCols(l);
    basis.leftCols(l) = new_basis;
    image.leftCols(l) = new_image;
    cols = l;
    next = 0;
    // The first expansions re-derive the residual directions of the kept vectors.
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r.residuals.maxCoeff());
  throw Error(Errc::NoConvergence,
              std::string("Lanczos did not reach the residual tolerance within the restart limit (max residual ") + buf + ")");
}

}  // namespace patchdg
