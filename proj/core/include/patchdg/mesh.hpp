// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "patchdg/error.hpp"

namespace patchdg {

/// Coordinates are always stored in 3D; in 2D meshes the z component is 0.
using Point = Eigen::Vector3d;

enum class ElementKind { Simplex, Polygon };

/// Immutable unstructured mesh of simplices (2D/3D) or star-shaped polygons (2D).
///
/// Simplices are reoriented on construction so that their signed measure is
/// positive. Polygons must already be counter-clockwise.
class Mesh {
 public:
  Mesh() = default;
  Mesh(int dim, ElementKind kind, std::vector<Point> vertices, std::vector<std::vector<Index>> elements);

  int dim() const noexcept { return dim_; }
  ElementKind kind() const noexcept { return kind_; }
  Index num_vertices() const noexcept { return static_cast<Index>(vertices_.size()); }
  Index num_elements() const noexcept { return static_cast<Index>(elements_.size()); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const Point& vertex(Index i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const std::vector<std::vector<Index>>& elements() const noexcept { return elements_; }
  const std::vector<Index>& element(Index k) const { return elements_[static_cast<std::size_t>(k)]; }

 private:
  int dim_ = 2;
  ElementKind kind_ = ElementKind::Simplex;
  std::vector<Point> vertices_;
  std::vector<std::vector<Index>> elements_;
};

/// A (dim-1)-facet shared by one (boundary) or two (interior) elements.
struct Face {
  std::vector<Index> vertices;
  Index plus = -1;   // K+, the lower element id
  Index minus = -1;  // K-, or -1 on the boundary
  Point normal = Point::Zero();  // unit outward normal of K+
  double diameter = 0.0;         // h_e
  double measure = 0.0;

  bool boundary() const noexcept { return minus < 0; }
  /// Outward normal seen from `element`, which must be plus or minus.
  Point normal_from(Index element) const { return element == plus ? normal : Point(-normal); }
};

struct FaceTopology {
  std::vector<Face> faces;
  std::vector<std::vector<Index>> element_faces;  // face ids per element
  std::vector<std::vector<Index>> neighbors;      // Von Neumann neighbors per element, ascending

  Index num_faces() const noexcept { return static_cast<Index>(faces.size()); }
  Index num_interior() const noexcept;
  Index num_boundary() const noexcept { return num_faces() - num_interior(); }
};

/// Simplex given by its vertex coordinates (dim + 1 of them are meaningful).
struct Simplex {
  int dim = 2;
  std::array<Point, 4> vertices{};

  std::span<const Point> points() const { return {vertices.data(), static_cast<std::size_t>(dim + 1)}; }
};

struct ElementGeometry {
  Point barycenter = Point::Zero();
  double diameter = 0.0;
  double measure = 0.0;
  std::vector<Simplex> sub_simplices;
};

/// n x n squares on [0, side]^2, each cut along its (i,j)-(i+1,j+1) diagonal.
Mesh generate_square_tri(int n, double side);

/// Kuhn triangulation of the unit cube: 6 tetrahedra per sub-cube.
Mesh generate_cube_tet(int n);

/// Reads ASCII Gmsh MSH 2.2; keeps triangles (type 2) or tetrahedra (type 4).
Mesh parse_msh(std::string_view text);
std::string write_msh(const Mesh& mesh);

/// Line format: "V E", V lines "x y", E lines "k i1 ... ik" (0-based, CCW).
Mesh parse_poly(std::string_view text);
std::string write_poly(const Mesh& mesh);

/// Reads a mesh file, choosing the parser from the extension (.msh or .poly).
Mesh read_mesh_file(const std::string& path);

FaceTopology build_topology(const Mesh& mesh);

ElementGeometry element_geometry(const Mesh& mesh, Index element);
std::vector<ElementGeometry> compute_geometry(const Mesh& mesh);

/// Signed measure of a simplex in its own dimension (area in 2D, volume in 3D).
double signed_measure(const Simplex& s);

/// Largest element diameter.
double mesh_size(std::span<const ElementGeometry> geometry);

}  // namespace patchdg
