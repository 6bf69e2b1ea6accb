// SPDX-License-Identifier: Apache-2.0
#include "patchdg/patch.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "patchdg/quadrature.hpp"
#include "patchdg/reconstruction.hpp"

namespace patchdg {

namespace {

struct Candidate {
  double distance;
  Index id;
  bool operator>(const Candidate& o) const { return distance != o.distance ? distance > o.distance : id > o.id; }
};

double union_diameter(const Mesh& mesh, const std::vector<Index>& members) {
  std::set<Index> verts;
  for (Index k : members)
    for (Index v : mesh.element(k)) verts.insert(v);
  std::vector<Point> pts;
  for (Index v : verts) pts.push_back(mesh.vertex(v));
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

void finalize(Patch& patch, const Mesh& mesh, std::span<const ElementGeometry> geometry) {
  patch.nodes.clear();
  for (Index k : patch.members) patch.nodes.push_back(geometry[static_cast<std::size_t>(k)].barycenter);
  patch.diameter = union_diameter(mesh, patch.members);
}

}  // namespace

std::size_t required_dim(int m, int dim) {
  if (m < 0 || dim < 1 || dim > 3) throw Error(Errc::InvalidArgument, "required_dim needs m >= 0 and dim in 1..3");
  std::size_t r = 1;
  for (int i = 1; i <= dim; ++i) r = r * static_cast<std::size_t>(m + i) / static_cast<std::size_t>(i);
  return r;
}

std::size_t default_patch_size(int m, int dim) {
  const std::size_t n = required_dim(m, dim);
  return std::max(n + 1, (3 * n + 1) / 2);
}

Patch build_patch(const Mesh& mesh, const FaceTopology& topology, std::span<const ElementGeometry> geometry,
                  Index element, std::size_t size) {
  if (size < 1) throw Error(Errc::InvalidArgument, "patch size must be >= 1");
  const Point& center = geometry[static_cast<std::size_t>(element)].barycenter;
  Patch patch;
  patch.center = element;
  patch.members.push_back(element);

  std::set<Index> seen{element};
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> frontier;
  auto push_neighbors = [&](Index k) {
    for (Index nb : topology.neighbors[static_cast<std::size_t>(k)])
      if (seen.insert(nb).second)
        frontier.push({(geometry[static_cast<std::size_t>(nb)].barycenter - center).norm(), nb});
  };
  push_neighbors(element);
  while (patch.members.size() < size) {
    if (frontier.empty())
      throw Error(Errc::PatchExhausted,
                  "only " + std::to_string(patch.members.size()) + " connected elements reachable, need " +
                      std::to_string(size),
                  element);
    const Index next = frontier.top().id;
    frontier.pop();
    patch.members.push_back(next);
    push_neighbors(next);
  }
  finalize(patch, mesh, geometry);
  return patch;
}

Patch build_patch(const Mesh& mesh, const FaceTopology& topology, Index element, std::size_t size) {
  const auto geometry = compute_geometry(mesh);
  return build_patch(mesh, topology, geometry, element, size);
}

bool grow_ring(Patch& patch, const Mesh& mesh, const FaceTopology& topology, std::span<const ElementGeometry> geometry) {
  const Point& center = geometry[static_cast<std::size_t>(patch.center)].barycenter;
  std::set<Index> in(patch.members.begin(), patch.members.end());
  std::vector<Candidate> ring;
  for (Index k : patch.members)
    for (Index nb : topology.neighbors[static_cast<std::size_t>(k)])
      if (in.insert(nb).second) ring.push_back({(geometry[static_cast<std::size_t>(nb)].barycenter - center).norm(), nb});
  if (ring.empty()) return false;
  std::sort(ring.begin(), ring.end(), [](const Candidate& a, const Candidate& b) { return b > a; });
  for (const auto& c : ring) patch.members.push_back(c.id);
  finalize(patch, mesh, geometry);
  return true;
}

double lambda_constant(const Mesh& mesh, std::span<const ElementGeometry> geometry, const Patch& patch, int m) {
  const LocalBasis basis = fit_local(patch, m, mesh.dim());
  const int order = std::min(std::max(2 * m, 1), max_order(mesh.dim()));
  std::vector<Point> samples;
  for (Index k : patch.members) {
    for (Index v : mesh.element(k)) samples.push_back(mesh.vertex(v));
    for (const auto& s : geometry[static_cast<std::size_t>(k)].sub_simplices) {
      const auto q = map_rule(simplex_rule(mesh.dim(), order), s.points());
      samples.insert(samples.end(), q.points.begin(), q.points.end());
    }
  }
  double lambda = 0.0;
  for (const auto& x : samples) lambda = std::max(lambda, eval_shape(basis, x, 0).value.cwiseAbs().sum());
  return lambda;
}

}  // namespace patchdg
