// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "patchdg/mesh.hpp"

namespace patchdg {

/// Rule on the reference simplex {x_i >= 0, sum x_i <= 1} of dimension `dim`.
struct QuadRule {
  int dim = 0;
  int order = 0;
  std::vector<Point> points;
  std::vector<double> weights;
};

struct MappedRule {
  std::vector<Point> points;
  std::vector<double> weights;
};

inline constexpr int kMaxOrder1D = 21;
inline constexpr int kMaxOrder2D = 12;
inline constexpr int kMaxOrder3D = 8;

int max_order(int dim);

/// Collapsed-coordinate (conical product) Gauss-Jacobi rule exact for total
/// degree <= order. All weights are positive.
const QuadRule& simplex_rule(int dim, int order);

/// Affine map onto a physical simplex. The simplex may live in a higher ambient
/// dimension (a triangle facet in 3D); weights are scaled by the k-dimensional
/// measure factor sqrt(det(J^T J)).
MappedRule map_rule(const QuadRule& rule, std::span<const Point> simplex);

/// Quadrature on a mesh facet: a segment in 2D meshes, a triangle in 3D meshes.
MappedRule face_rule(int mesh_dim, int order, std::span<const Point> face);

/// Gauss-Jacobi nodes/weights on [0,1] for the weight (1-s)^a.
void gauss_jacobi_01(int npoints, int a, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace patchdg
