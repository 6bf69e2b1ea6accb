// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "patchdg/sym_sparse.hpp"

namespace patchdg {

/// Eigenpairs of A x = lambda M x: ascending values, M-orthonormal vectors
/// (one per column), and relative residuals |A x - lambda M x| / |A x|.
///
/// `floors` estimates the smallest residual double precision can show for
/// each pair, eps |(|A| |x|)| / |A x|. For fourth-order problems on fine
/// meshes it can exceed 1e-9 for the lowest modes.
struct EigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;
  Eigen::VectorXd floors;

  Index size() const noexcept { return values.size(); }
};

/// A pair counts as converged once its residual is within this multiple of
/// its rounding floor, even if that is above the requested tolerance.
inline constexpr double kFloorFactor = 32.0;

/// Systems up to this size may use the full dense solver.
inline constexpr Index kDenseThreshold = 6000;

/// Full spectrum via M = L L^T and a dense symmetric eigensolver on
/// L^-1 A L^-T. Throws MassNotSPD, or PenaltyTooSmall when some eigenvalue is
/// below -1e-8 |A|.
EigenResult solve_dense(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m);
EigenResult solve_dense(const SymSparseMatrix& a, const SymSparseMatrix& m);

struct LanczosOptions {
  double tol = 1e-9;
  int block = 3;           // starting vectors; must exceed the largest multiplicity sought
  Index subspace = 0;      // 0: chosen from k
  int max_restarts = 0;    // 0: 50 * k
  std::uint64_t seed = 20190101;
};

/// k smallest eigenpairs by block Lanczos on the shift-invert operator A^-1 M
/// (shift 0) with full M-orthogonalization and thick restarts. A is factored
/// once by sparse Cholesky. k >= n falls back to solve_dense.
/// Throws StiffnessNotSPD or NoConvergence.
EigenResult solve_smallest(const SymSparseMatrix& a, const SymSparseMatrix& m, Index k,
                           const LanczosOptions& options = {});

/// eps |(|A| |x|)|_2 / |A x|_2.
double residual_floor(const SymSparseMatrix& a, const Eigen::VectorXd& x);

/// |A x - lambda M x|_2 / |A x|_2.
double relative_residual(const SymSparseMatrix& a, const SymSparseMatrix& m, double lambda, const Eigen::VectorXd& x);

/// Scales x so its largest-magnitude entry is positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> x);

/// True when a dense Cholesky factorization of the matrix succeeds.
bool is_positive_definite(const SymSparseMatrix& a);

}  // namespace patchdg
