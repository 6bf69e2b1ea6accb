// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "patchdg/mesh.hpp"
#include "patchdg/reconstruction.hpp"
#include "patchdg/sym_sparse.hpp"

namespace patchdg {

enum class Problem { Laplace, Biharmonic };

/// Dirichlet is the (only) Laplace condition u = 0. Clamped is u = du/dn = 0
/// and SimplySupported is u = Delta u = 0, both for the biharmonic problem.
enum class BoundaryCondition { Dirichlet, Clamped, SimplySupported };

const char* to_string(Problem p) noexcept;
const char* to_string(BoundaryCondition bc) noexcept;

/// Order of the operator: 1 for Laplace, 2 for biharmonic.
inline int operator_order(Problem p) noexcept { return p == Problem::Laplace ? 1 : 2; }

struct FormConfig {
  Problem problem = Problem::Laplace;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  double eta = 10.0;    // Laplace penalty base, scaled by m^2
  double alpha = 20.0;  // biharmonic value-jump penalty base, scaled by m^4
  double beta = 10.0;   // biharmonic normal-derivative penalty base, scaled by m^2
  int m = 1;

  double eta_effective() const noexcept { return eta * m * m; }
  double alpha_effective() const noexcept { return alpha * m * m * m * m; }
  double beta_effective() const noexcept { return beta * m * m; }

  /// Throws InvalidArgument / DegreeTooLow on inconsistent settings.
  void validate() const;
};

/// Symmetric interior penalty stiffness for -Delta with weak u = 0.
SymSparseMatrix assemble_laplace(const Mesh& mesh, const FaceTopology& topology, const Space& space,
                                 const FormConfig& config);

/// Symmetric interior penalty stiffness for Delta^2 (clamped or simply supported).
SymSparseMatrix assemble_biharmonic(const Mesh& mesh, const FaceTopology& topology, const Space& space,
                                    const FormConfig& config);

/// Dispatches on config.problem.
SymSparseMatrix assemble_stiffness(const Mesh& mesh, const FaceTopology& topology, const Space& space,
                                   const FormConfig& config);

/// L2 mass matrix of the reconstructed basis.
SymSparseMatrix assemble_mass(const Mesh& mesh, const Space& space);

/// Load vector b_j = (f, psi_j).
Eigen::VectorXd assemble_load(const Space& space, const std::function<double(const Point&)>& f);

}  // namespace patchdg
