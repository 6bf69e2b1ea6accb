// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "patchdg/mesh.hpp"

namespace patchdg {

/// Element patch S(K) with its sampling nodes (member barycenters).
struct Patch {
  Index center = -1;
  std::vector<Index> members;  // members[0] == center
  std::vector<Point> nodes;
  double diameter = 0.0;  // d_K, diameter of the union of member elements

  std::size_t size() const noexcept { return members.size(); }
};

/// Dimension of the polynomial space of total degree m in `dim` variables,
/// binomial(m + dim, dim).
std::size_t required_dim(int m, int dim);

/// max(required_dim + 1, ceil(1.5 * required_dim)).
std::size_t default_patch_size(int m, int dim);

/// Grows {K} by repeatedly adding the face neighbor (of the current set) whose
/// barycenter is nearest to x_K; ties go to the lower element id.
Patch build_patch(const Mesh& mesh, const FaceTopology& topology, std::span<const ElementGeometry> geometry,
                  Index element, std::size_t size);
Patch build_patch(const Mesh& mesh, const FaceTopology& topology, Index element, std::size_t size);

/// Adds every face neighbor of the current members (one ring), nearest first.
/// Returns false when nothing could be added.
bool grow_ring(Patch& patch, const Mesh& mesh, const FaceTopology& topology, std::span<const ElementGeometry> geometry);

/// Upper estimate of Lambda(m, I_K): the max-norm of the map from sampled node
/// values to reconstructed values at dense sample points of S(K) (quadrature
/// points plus vertices of every member). Exactly 1 for m = 0.
double lambda_constant(const Mesh& mesh, std::span<const ElementGeometry> geometry, const Patch& patch, int m);

}  // namespace patchdg
