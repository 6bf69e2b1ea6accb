// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "patchdg/assembly.hpp"

namespace patchdg {

/// A smooth function with derivatives up to second order.
struct SmoothFunction {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<Eigen::Matrix3d(const Point&)> hessian;
};

/// A field exact_weight * u + dofs_weight * R(dofs); either part may be absent.
struct FieldTerm {
  double exact_weight = 0.0;
  const Eigen::VectorXd* dofs = nullptr;
  double dofs_weight = 1.0;
};

enum class NormKind {
  L2,
  BrokenH1,  // sum_K |grad v|^2 only
  Energy1,   // sum_K |grad v|^2 + sum_e h^-1 |[v]|^2
  Energy2,   // sum_K |Delta v|^2 + sum_e (h^-3 |[v]|^2 + h^-1 |[grad v]|^2)
};

/// Matrix of inner products between fields in the chosen (semi-)norm. For
/// Energy2 with a simply supported condition the boundary slope jumps are
/// left out, since u = Delta u = 0 does not constrain du/dn.
Eigen::MatrixXd field_gram(const Mesh& mesh, const FaceTopology& topology, const Space& space, const SmoothFunction* exact,
                           std::span<const FieldTerm> fields, NormKind kind,
                           BoundaryCondition bc = BoundaryCondition::Dirichlet);

/// Norm of u - R(dofs). Pass nullptr to drop either part.
double field_norm(const Mesh& mesh, const FaceTopology& topology, const Space& space, const SmoothFunction* exact,
                  const Eigen::VectorXd* dofs, NormKind kind, BoundaryCondition bc = BoundaryCondition::Dirichlet);

/// ||u - R(dofs)||_h (p = 1) or |||u - R(dofs)|||_h (p = 2).
double energy_norm(const Mesh& mesh, const FaceTopology& topology, const Space& space, const SmoothFunction* exact,
                   const Eigen::VectorXd* dofs, int p, BoundaryCondition bc);

struct InterpolationErrors {
  double l2 = 0.0;
  double broken_h1 = 0.0;
};

InterpolationErrors interpolation_errors(const Space& space, const SmoothFunction& u, const Eigen::VectorXd& dofs);

}  // namespace patchdg
