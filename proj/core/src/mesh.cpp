// SPDX-License-Identifier: Apache-2.0
#include "patchdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <Eigen/Geometry>

namespace patchdg {

namespace {

double max_pairwise_distance(std::span<const Point> pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

double polygon_signed_area(const Mesh& mesh, const std::vector<Index>& poly) {
  double a = 0.0;
  const std::size_t k = poly.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Point& p = mesh.vertex(poly[i]);
    const Point& q = mesh.vertex(poly[(i + 1) % k]);
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Simplex simplex_of(const Mesh& mesh, const std::vector<Index>& verts) {
  Simplex s;
  s.dim = mesh.dim();
  for (std::size_t i = 0; i < verts.size() && i < 4; ++i) s.vertices[i] = mesh.vertex(verts[i]);
  return s;
}

// Facets of one element, each listed in the element's local orientation.
std::vector<std::vector<Index>> element_facets(const Mesh& mesh, const std::vector<Index>& e) {
  std::vector<std::vector<Index>> out;
  if (mesh.dim() == 2) {
    for (std::size_t i = 0; i < e.size(); ++i) out.push_back({e[i], e[(i + 1) % e.size()]});
  } else {
    out.push_back({e[1], e[2], e[3]});
    out.push_back({e[0], e[3], e[2]});
    out.push_back({e[0], e[1], e[3]});
    out.push_back({e[0], e[2], e[1]});
  }
  return out;
}

}  // namespace

Mesh::Mesh(int dim, ElementKind kind, std::vector<Point> vertices, std::vector<std::vector<Index>> elements)
    : dim_(dim), kind_(kind), vertices_(std::move(vertices)), elements_(std::move(elements)) {
  if (dim_ != 2 && dim_ != 3) throw Error(Errc::InvalidArgument, "mesh dimension must be 2 or 3");
  if (kind_ == ElementKind::Polygon && dim_ != 2)
    throw Error(Errc::InvalidArgument, "polygonal elements are 2D only");
  if (dim_ == 2)
    for (auto& v : vertices_) v.z() = 0.0;

  const Index nv = num_vertices();
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    auto& e = elements_[k];
    const Index id = static_cast<Index>(k);
    if (kind_ == ElementKind::Simplex && static_cast<int>(e.size()) != dim_ + 1)
      throw Error(Errc::BadCount, "simplex element with wrong vertex count", id);
    if (kind_ == ElementKind::Polygon && e.size() < 3)
      throw Error(Errc::BadCount, "polygon with fewer than 3 vertices", id);
    for (Index v : e)
      if (v < 0 || v >= nv) throw Error(Errc::DanglingNode, "element references missing vertex", id);
    if (kind_ == ElementKind::Simplex && signed_measure(simplex_of(*this, e)) < 0.0) std::swap(e[0], e[1]);
  }
}

Index FaceTopology::num_interior() const noexcept {
  return static_cast<Index>(std::count_if(faces.begin(), faces.end(), [](const Face& f) { return !f.boundary(); }));
}

double signed_measure(const Simplex& s) {
  const Point& a = s.vertices[0];
  if (s.dim == 1) return (s.vertices[1] - a).norm();
  if (s.dim == 2) {
    const Point u = s.vertices[1] - a, v = s.vertices[2] - a;
    return 0.5 * (u.x() * v.y() - u.y() * v.x());
  }
  const Point u = s.vertices[1] - a, v = s.vertices[2] - a, w = s.vertices[3] - a;
  return u.dot(v.cross(w)) / 6.0;
}

double mesh_size(std::span<const ElementGeometry> geometry) {
  double h = 0.0;
  for (const auto& g : geometry) h = std::max(h, g.diameter);
  return h;
}

Mesh generate_square_tri(int n, double side) {
  if (n < 1 || !(side > 0.0)) throw Error(Errc::InvalidArgument, "generate_square_tri requires n >= 1 and side > 0");
  std::vector<Point> verts;
  verts.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  const double h = side / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(i * h, j * h, 0.0);
  auto id = [n](int i, int j) { return static_cast<Index>(j * (n + 1) + i); };
  std::vector<std::vector<Index>> elems;
  elems.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      elems.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      elems.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return Mesh(2, ElementKind::Simplex, std::move(verts), std::move(elems));
}

Mesh generate_cube_tet(int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "generate_cube_tet requires n >= 1");
  std::vector<Point> verts;
  const double h = 1.0 / n;
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) verts.emplace_back(i * h, j * h, k * h);
  auto id = [n](int i, int j, int k) { return static_cast<Index>((k * (n + 1) + j) * (n + 1) + i); };
  // Every tetrahedron follows a monotone path from corner (0,0,0) to (1,1,1).
  static constexpr std::array<std::array<int, 3>, 6> kPerms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<std::vector<Index>> elems;
  elems.reserve(static_cast<std::size_t>(6 * n * n * n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& perm : kPerms) {
          std::array<int, 3> c{i, j, k};
          std::vector<Index> tet{id(c[0], c[1], c[2])};
          for (int axis : perm) {
            ++c[static_cast<std::size_t>(axis)];
            tet.push_back(id(c[0], c[1], c[2]));
          }
          elems.push_back(std::move(tet));
        }
  return Mesh(3, ElementKind::Simplex, std::move(verts), std::move(elems));
}

FaceTopology build_topology(const Mesh& mesh) {
  const Index ne = mesh.num_elements();
  {
    std::set<std::vector<Index>> seen;
    for (Index k = 0; k < ne; ++k) {
      auto key = mesh.element(k);
      std::sort(key.begin(), key.end());
      if (!seen.insert(std::move(key)).second)
        throw Error(Errc::NonManifold, "two elements share the same vertex set", k);
    }
  }

  FaceTopology topo;
  topo.element_faces.resize(static_cast<std::size_t>(ne));
  topo.neighbors.resize(static_cast<std::size_t>(ne));
  std::map<std::vector<Index>, Index> lookup;
  std::vector<ElementGeometry> geom = compute_geometry(mesh);

  for (Index k = 0; k < ne; ++k) {
    for (auto& facet : element_facets(mesh, mesh.element(k))) {
      auto key = facet;
      std::sort(key.begin(), key.end());
      auto [it, inserted] = lookup.try_emplace(key, topo.num_faces());
      if (inserted) {
        Face f;
        f.vertices = std::move(facet);
        f.plus = k;
        topo.faces.push_back(std::move(f));
      } else {
        Face& f = topo.faces[static_cast<std::size_t>(it->second)];
        if (f.minus >= 0) throw Error(Errc::NonManifold, "facet shared by more than two elements", k);
        f.minus = k;
      }
      topo.element_faces[static_cast<std::size_t>(k)].push_back(it->second);
    }
  }

  for (auto& f : topo.faces) {
    std::vector<Point> pts;
    for (Index v : f.vertices) pts.push_back(mesh.vertex(v));
    f.diameter = max_pairwise_distance(pts);
    Point n;
    if (mesh.dim() == 2) {
      const Point t = pts[1] - pts[0];
      f.measure = t.norm();
      n = Point(t.y(), -t.x(), 0.0);
    } else {
      n = (pts[1] - pts[0]).cross(pts[2] - pts[0]);
      f.measure = 0.5 * n.norm();
    }
    n.normalize();
    Point mid = Point::Zero();
    for (const auto& p : pts) mid += p;
    mid /= static_cast<double>(pts.size());
    if (n.dot(mid - geom[static_cast<std::size_t>(f.plus)].barycenter) < 0.0) n = -n;
    f.normal = n;
    if (f.minus >= 0) {
      topo.neighbors[static_cast<std::size_t>(f.plus)].push_back(f.minus);
      topo.neighbors[static_cast<std::size_t>(f.minus)].push_back(f.plus);
    }
  }
  for (auto& nb : topo.neighbors) std::sort(nb.begin(), nb.end());
  return topo;
}

ElementGeometry element_geometry(const Mesh& mesh, Index element) {
  const auto& e = mesh.element(element);
  ElementGeometry g;
  std::vector<Point> pts;
  for (Index v : e) pts.push_back(mesh.vertex(v));
  g.diameter = max_pairwise_distance(pts);

  if (mesh.kind() == ElementKind::Simplex) {
    Simplex s = simplex_of(mesh, e);
    g.measure = std::abs(signed_measure(s));
    for (const auto& p : pts) g.barycenter += p;
    g.barycenter /= static_cast<double>(pts.size());
    g.sub_simplices.push_back(s);
  } else {
    const double area = polygon_signed_area(mesh, e);
    if (area <= 0.0) throw Error(Errc::NonCCW, "polygon is not counter-clockwise", element);
    Point c = Point::Zero();
    const std::size_t k = pts.size();
    for (std::size_t i = 0; i < k; ++i) {
      const Point& p = pts[i];
      const Point& q = pts[(i + 1) % k];
      const double cr = p.x() * q.y() - q.x() * p.y();
      c.x() += (p.x() + q.x()) * cr;
      c.y() += (p.y() + q.y()) * cr;
    }
    c /= 6.0 * area;
    g.barycenter = c;
    g.measure = area;
    for (std::size_t i = 0; i < k; ++i) {
      Simplex s;
      s.dim = 2;
      s.vertices[0] = c;
      s.vertices[1] = pts[i];
      s.vertices[2] = pts[(i + 1) % k];
      if (signed_measure(s) <= 1e-14 * g.diameter * g.diameter)
        throw Error(Errc::NotStarShaped, "polygon is not star-shaped with respect to its centroid", element);
      g.sub_simplices.push_back(s);
    }
  }
  if (g.measure <= 1e-14 * std::pow(g.diameter, mesh.dim()))
    throw Error(Errc::DegenerateElement, "element measure is numerically zero", element);
  return g;
}

std::vector<ElementGeometry> compute_geometry(const Mesh& mesh) {
  std::vector<ElementGeometry> out;
  out.reserve(static_cast<std::size_t>(mesh.num_elements()));
  for (Index k = 0; k < mesh.num_elements(); ++k) out.push_back(element_geometry(mesh, k));
  return out;
}

}  // namespace patchdg
