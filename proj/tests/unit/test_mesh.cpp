// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "patchdg/mesh.hpp"

using namespace patchdg;

namespace {

constexpr double kPi = std::numbers::pi;

double total_measure(const Mesh& m) {
  double s = 0.0;
  for (const auto& g : compute_geometry(m)) s += g.measure;
  return s;
}

// Facet -> incident element count, enumerated without build_topology.
std::map<std::vector<Index>, int> facet_counts(const Mesh& m) {
  std::map<std::vector<Index>, int> count;
  for (const auto& e : m.elements()) {
    const std::size_t nv = e.size();
    if (m.dim() == 2) {
      for (std::size_t i = 0; i < nv; ++i) {
        std::vector<Index> f{e[i], e[(i + 1) % nv]};
        std::sort(f.begin(), f.end());
        ++count[f];
      }
    } else {
      for (std::size_t skip = 0; skip < 4; ++skip) {
        std::vector<Index> f;
        for (std::size_t i = 0; i < 4; ++i)
          if (i != skip) f.push_back(e[i]);
        std::sort(f.begin(), f.end());
        ++count[f];
      }
    }
  }
  return count;
}

const char* kTwoTriangles = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
6
1 15 2 0 1 1
2 1 2 0 1 1 2
3 1 2 0 1 2 3
4 1 2 0 1 3 4
5 2 2 0 1 1 2 3
6 2 2 0 1 1 3 4
$EndElements
)";

}  // namespace

TEST(SquareGenerator, MinimalSplit) {
  const Mesh m = generate_square_tri(1, kPi);
  EXPECT_EQ(m.num_elements(), 2);
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.dim(), 2);
}

TEST(SquareGenerator, AreaConservation) {
  for (int n : {2, 5, 9}) {
    const Mesh m = generate_square_tri(n, kPi);
    EXPECT_EQ(m.num_elements(), 2 * n * n);
    EXPECT_EQ(m.num_vertices(), (n + 1) * (n + 1));
    EXPECT_NEAR(total_measure(m), kPi * kPi, 1e-12);
  }
}

TEST(SquareGenerator, HandshakeIdentity) {
  const Mesh m = generate_square_tri(4, kPi);
  int interior = 0, boundary = 0;
  for (const auto& [f, c] : facet_counts(m)) {
    ASSERT_LE(c, 2);
    (c == 2 ? interior : boundary)++;
  }
  EXPECT_EQ(boundary, 16);
  EXPECT_EQ(3 * m.num_elements(), 2 * interior + boundary);
  const FaceTopology t = build_topology(m);
  EXPECT_EQ(t.num_interior(), interior);
  EXPECT_EQ(t.num_boundary(), boundary);
}

TEST(CubeGenerator, Counts) {
  const Mesh m1 = generate_cube_tet(1);
  EXPECT_EQ(m1.num_elements(), 6);
  EXPECT_EQ(m1.num_vertices(), 8);
  const Mesh m2 = generate_cube_tet(2);
  EXPECT_EQ(m2.num_elements(), 48);
  EXPECT_NEAR(total_measure(m2), 1.0, 1e-12);
  EXPECT_NEAR(total_measure(generate_cube_tet(5)), 1.0, 1e-12);
}

TEST(CubeGenerator, FacesOfOneCube) {
  const Mesh m = generate_cube_tet(1);
  const auto counts = facet_counts(m);
  int interior = 0;
  for (const auto& [f, c] : counts) interior += c == 2;
  EXPECT_EQ(counts.size(), 18u);
  EXPECT_EQ(interior, 6);
  const FaceTopology t = build_topology(m);
  EXPECT_EQ(t.num_faces(), 18);
  EXPECT_EQ(t.num_interior(), 6);
}

TEST(CubeGenerator, InteriorFacesHaveTwoTets) {
  const Mesh m = generate_cube_tet(2);
  const FaceTopology t = build_topology(m);
  const auto counts = facet_counts(m);
  for (const Face& f : t.faces) {
    std::vector<Index> key = f.vertices;
    std::sort(key.begin(), key.end());
    const bool on_boundary = [&] {
      for (int d = 0; d < 3; ++d) {
        bool all0 = true, all1 = true;
        for (Index v : key) {
          all0 = all0 && std::abs(m.vertex(v)[d]) < 1e-14;
          all1 = all1 && std::abs(m.vertex(v)[d] - 1.0) < 1e-14;
        }
        if (all0 || all1) return true;
      }
      return false;
    }();
    EXPECT_EQ(f.boundary(), on_boundary);
    EXPECT_EQ(counts.at(key), on_boundary ? 1 : 2);
  }
}

TEST(Topology, NormalsAndSides) {
  for (const Mesh& m : {generate_square_tri(3, 2.0), generate_cube_tet(2)}) {
    const FaceTopology t = build_topology(m);
    const auto geo = compute_geometry(m);
    for (const Face& f : t.faces) {
      EXPECT_NEAR(f.normal.norm(), 1.0, 1e-12);
      Point c = Point::Zero();
      for (Index v : f.vertices) c += m.vertex(v);
      c /= double(f.vertices.size());
      EXPECT_GT(f.normal.dot(c - geo[std::size_t(f.plus)].barycenter), 0.0);
      // normal is orthogonal to the face
      for (Index v : f.vertices) EXPECT_NEAR(f.normal.dot(m.vertex(v) - c), 0.0, 1e-12);
      if (!f.boundary()) {
        EXPECT_LT(f.plus, f.minus);
        EXPECT_GT(f.normal_from(f.minus).dot(c - geo[std::size_t(f.minus)].barycenter), 0.0);
        EXPECT_TRUE((f.normal_from(f.minus) + f.normal).norm() < 1e-12);
      }
    }
  }
}

TEST(Topology, FaceDiameter) {
  const Mesh m = generate_square_tri(1, 1.0);
  const FaceTopology t = build_topology(m);
  int diagonals = 0;
  for (const Face& f : t.faces) {
    if (!f.boundary()) {
      EXPECT_NEAR(f.diameter, std::sqrt(2.0), 1e-14);
      ++diagonals;
    } else {
      EXPECT_NEAR(f.diameter, 1.0, 1e-14);
      EXPECT_NEAR(f.measure, 1.0, 1e-14);
    }
  }
  EXPECT_EQ(diagonals, 1);
  const Mesh c = generate_cube_tet(1);
  for (const Face& f : build_topology(c).faces) {
    double d = 0.0;
    for (Index a : f.vertices)
      for (Index b : f.vertices) d = std::max(d, (c.vertex(a) - c.vertex(b)).norm());
    EXPECT_DOUBLE_EQ(f.diameter, d);
  }
}

TEST(Topology, DuplicateElementIsNonManifold) {
  std::vector<Point> v{Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)};
  const Mesh m(2, ElementKind::Simplex, v, {{0, 1, 2}, {0, 1, 2}});
  try {
    build_topology(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonManifold);
  }
}

TEST(Topology, NeighborsAreSymmetric) {
  const Mesh m = generate_cube_tet(2);
  const FaceTopology t = build_topology(m);
  for (Index k = 0; k < m.num_elements(); ++k)
    for (Index j : t.neighbors[std::size_t(k)]) {
      const auto& back = t.neighbors[std::size_t(j)];
      EXPECT_TRUE(std::binary_search(back.begin(), back.end(), k));
    }
}

TEST(Mesh, DanglingNode) {
  std::vector<Point> v{Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)};
  try {
    Mesh(2, ElementKind::Simplex, v, {{0, 1, 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DanglingNode);
  }
}

TEST(Mesh, ClockwiseTriangleIsReoriented) {
  std::vector<Point> v{Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)};
  const Mesh m(2, ElementKind::Simplex, v, {{0, 2, 1}});
  const auto g = element_geometry(m, 0);
  EXPECT_NEAR(g.measure, 0.5, 1e-15);
  Simplex s{2, {m.vertex(m.element(0)[0]), m.vertex(m.element(0)[1]), m.vertex(m.element(0)[2]), Point::Zero()}};
  EXPECT_GT(signed_measure(s), 0.0);
}

TEST(Geometry, ReferenceTriangle) {
  std::vector<Point> v{Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)};
  const Mesh m(2, ElementKind::Simplex, v, {{0, 1, 2}});
  const auto g = element_geometry(m, 0);
  EXPECT_NEAR(g.barycenter[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.barycenter[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.measure, 0.5, 1e-15);
  EXPECT_NEAR(g.diameter, std::sqrt(2.0), 1e-15);
}

TEST(Geometry, DegenerateElement) {
  std::vector<Point> v{Point(0, 0, 0), Point(1, 0, 0), Point(2, 0, 0)};
  const Mesh m(2, ElementKind::Simplex, v, {{0, 1, 2}});
  try {
    element_geometry(m, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegenerateElement);
  }
}

TEST(Geometry, UnitSquarePolygon) {
  const Mesh m = parse_poly("4 1\n0 0\n1 0\n1 1\n0 1\n4 0 1 2 3\n");
  const auto g = element_geometry(m, 0);
  EXPECT_NEAR(g.measure, 1.0, 1e-15);
  EXPECT_NEAR(g.barycenter[0], 0.5, 1e-15);
  EXPECT_NEAR(g.barycenter[1], 0.5, 1e-15);
  ASSERT_EQ(g.sub_simplices.size(), 4u);
  for (const auto& s : g.sub_simplices) EXPECT_NEAR(signed_measure(s), 0.25, 1e-15);
}

TEST(Geometry, RegularHexagon) {
  std::vector<Point> v;
  for (int i = 0; i < 6; ++i) v.emplace_back(std::cos(kPi / 3.0 * i), std::sin(kPi / 3.0 * i), 0.0);
  const Mesh m(2, ElementKind::Polygon, v, {{0, 1, 2, 3, 4, 5}});
  const auto g = element_geometry(m, 0);
  EXPECT_NEAR(g.measure, 3.0 * std::sqrt(3.0) / 2.0, 1e-12);
  EXPECT_NEAR(g.barycenter.norm(), 0.0, 1e-14);
  EXPECT_NEAR(g.diameter, 2.0, 1e-14);
  double sub = 0.0;
  for (const auto& s : g.sub_simplices) sub += signed_measure(s);
  EXPECT_NEAR(sub, g.measure, 1e-12 * g.measure);
}

TEST(Geometry, NonConvexStarPolygon) {
  // L-shaped hexagon
  const Mesh m = parse_poly("6 1\n0 0\n2 0\n2 1\n1 1\n1 2\n0 2\n6 0 1 2 3 4 5\n");
  const auto g = element_geometry(m, 0);
  EXPECT_NEAR(g.measure, 3.0, 1e-14);
  EXPECT_NEAR(g.barycenter[0], 5.0 / 6.0, 1e-14);
  EXPECT_NEAR(g.barycenter[1], 5.0 / 6.0, 1e-14);
}

TEST(Geometry, SubSimplicesSumToMeasure) {
  for (const Mesh& m : {generate_square_tri(3, 1.5), generate_cube_tet(2)})
    for (const auto& g : compute_geometry(m)) {
      double s = 0.0;
      for (const auto& sub : g.sub_simplices) s += signed_measure(sub);
      EXPECT_NEAR(s, g.measure, 1e-12 * g.measure);
    }
}

TEST(Poly, ClockwiseIsRejected) {
  try {
    element_geometry(parse_poly("4 1\n0 0\n0 1\n1 1\n1 0\n4 0 1 2 3\n"), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonCCW);
  }
}

TEST(Poly, CentroidOutsideKernel) {
  // C shape; the centroid (1.7, 2) lies in the notch
  try {
    element_geometry(parse_poly("8 1\n0 0\n4 0\n4 1\n1 1\n1 3\n4 3\n4 4\n0 4\n8 0 1 2 3 4 5 6 7\n"), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotStarShaped);
    EXPECT_EQ(e.element(), Index{0});
  }
}

TEST(Poly, BadCount) {
  try {
    parse_poly("4 1\n0 0\n1 0\n1 1\n0 1\n5 0 1 2 3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadCount);
  }
}

TEST(Poly, QuadMeshTopology) {
  const Mesh m = parse_poly(
      "# 2x2 quads on [-1,1]^2\n9 4\n-1 -1\n0 -1\n1 -1\n-1 0\n0 0\n1 0\n-1 1\n0 1\n1 1\n"
      "4 0 1 4 3\n4 1 2 5 4\n4 3 4 7 6\n4 4 5 8 7\n");
  EXPECT_EQ(m.num_elements(), 4);
  EXPECT_EQ(m.num_vertices(), 9);
  const FaceTopology t = build_topology(m);
  EXPECT_EQ(t.num_interior(), 4);
  EXPECT_EQ(t.num_boundary(), 8);
  EXPECT_NEAR(total_measure(m), 4.0, 1e-14);
}

TEST(Poly, RoundTrip) {
  const Mesh m = parse_poly("5 2\n0 0\n2 0\n2 1\n0 1\n1 0.5\n4 0 1 4 3\n3 1 2 4\n");
  const Mesh back = parse_poly(write_poly(m));
  EXPECT_EQ(back.elements(), m.elements());
  for (Index v = 0; v < m.num_vertices(); ++v) EXPECT_EQ(back.vertex(v), m.vertex(v));
}

TEST(Msh, TwoTriangles) {
  const Mesh m = parse_msh(kTwoTriangles);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.num_elements(), 2);
  EXPECT_NEAR(total_measure(m), 1.0, 1e-15);
}

TEST(Msh, UnsupportedVersion) {
  std::string text = kTwoTriangles;
  text.replace(text.find("2.2 0 8"), 7, "4.1 0 8");
  try {
    parse_msh(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedVersion);
  }
}

TEST(Msh, DanglingNode) {
  std::string text = kTwoTriangles;
  text.replace(text.find("6 2 2 0 1 1 3 4"), 15, "6 2 2 0 1 1 3 9");
  try {
    parse_msh(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DanglingNode);
  }
}

TEST(Msh, NonTetTriangleWithTetsIsMixed) {
  const char* text = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
5
1 0 0 0
2 1 0 0
3 0 1 0
4 0 0 1
5 5 5 5
$EndNodes
$Elements
3
1 4 2 0 1 1 2 3 4
2 2 2 0 1 1 2 3
3 2 2 0 1 2 3 5
$EndElements
)";
  try {
    parse_msh(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MixedDimension);
  }
}

TEST(Msh, BoundaryTrianglesOfTetsAreIgnored) {
  const char* text = R"($MeshFormat
2.2 0 8
$EndMeshFormat
$Nodes
4
10 0 0 0
20 1 0 0
30 0 1 0
40 0 0 1
$EndNodes
$Elements
2
1 2 2 0 1 10 20 30
2 4 2 0 1 10 20 30 40
$EndElements
)";
  const Mesh m = parse_msh(text);
  EXPECT_EQ(m.dim(), 3);
  EXPECT_EQ(m.num_elements(), 1);
  EXPECT_NEAR(total_measure(m), 1.0 / 6.0, 1e-15);
}

TEST(Msh, RoundTrip) {
  for (const Mesh& m : {generate_square_tri(2, kPi), generate_cube_tet(2)}) {
    const Mesh back = parse_msh(write_msh(m));
    EXPECT_EQ(back.dim(), m.dim());
    EXPECT_EQ(back.elements(), m.elements());
    ASSERT_EQ(back.num_vertices(), m.num_vertices());
    for (Index v = 0; v < m.num_vertices(); ++v) EXPECT_LE((back.vertex(v) - m.vertex(v)).norm(), 1e-12);
  }
}

TEST(Msh, ReadFileByExtension) {
  const std::string path = ::testing::TempDir() + "patchdg_two.msh";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    ASSERT_NE(f, nullptr);
    std::fputs(kTwoTriangles, f);
    std::fclose(f);
  }
  EXPECT_EQ(read_mesh_file(path).num_elements(), 2);
  try {
    read_mesh_file(::testing::TempDir() + "missing.msh");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IoError);
  }
}
