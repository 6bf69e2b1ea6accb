// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "patchdg/csv.hpp"
#include "patchdg/mesh.hpp"

namespace patchdg {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_number(std::string_view tok, Errc code = Errc::ParseError) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw Error(code, "cannot parse number '" + std::string(tok) + "'");
  return value;
}

// Finds "$Name" and returns the index of the line after it, or npos.
std::size_t find_section(const std::vector<std::string_view>& lines, std::string_view name) {
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i] == name) return i + 1;
  return std::string_view::npos;
}

std::vector<Index> sorted(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

Mesh parse_msh(std::string_view text) {
  const auto lines = split_lines(text);
  const std::size_t fmt = find_section(lines, "$MeshFormat");
  if (fmt == std::string_view::npos || fmt >= lines.size()) throw Error(Errc::ParseError, "missing $MeshFormat");
  const auto header = split_ws(lines[fmt]);
  if (header.size() < 2 || header[0] != "2.2")
    throw Error(Errc::UnsupportedVersion, "only MSH 2.2 is supported, got '" + std::string(lines[fmt]) + "'");
  if (header[1] != "0") throw Error(Errc::UnsupportedVersion, "binary MSH files are not supported");

  const std::size_t nodes_at = find_section(lines, "$Nodes");
  const std::size_t elems_at = find_section(lines, "$Elements");
  if (nodes_at == std::string_view::npos) throw Error(Errc::ParseError, "missing $Nodes section");
  if (elems_at == std::string_view::npos) throw Error(Errc::ParseError, "missing $Elements section");

  auto line_at = [&](std::size_t i) {
    if (i >= lines.size()) throw Error(Errc::ParseError, "unexpected end of file");
    return lines[i];
  };

  const auto num_nodes = parse_number<long>(line_at(nodes_at));
  std::map<long, Index> node_index;
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(std::max(0L, num_nodes)));
  for (long i = 0; i < num_nodes; ++i) {
    const auto tok = split_ws(line_at(nodes_at + 1 + static_cast<std::size_t>(i)));
    if (tok.size() < 4) throw Error(Errc::ParseError, "malformed node line");
    node_index[parse_number<long>(tok[0])] = static_cast<Index>(vertices.size());
    vertices.emplace_back(parse_number<double>(tok[1]), parse_number<double>(tok[2]), parse_number<double>(tok[3]));
  }

  const auto num_elems = parse_number<long>(line_at(elems_at));
  std::vector<std::vector<Index>> triangles, tets;
  for (long i = 0; i < num_elems; ++i) {
    const auto tok = split_ws(line_at(elems_at + 1 + static_cast<std::size_t>(i)));
    if (tok.size() < 3) throw Error(Errc::ParseError, "malformed element line");
    const int type = parse_number<int>(tok[1]);
    const auto ntags = static_cast<std::size_t>(parse_number<int>(tok[2]));
    const std::size_t nverts = type == 2 ? 3 : type == 4 ? 4 : 0;
    if (nverts == 0) continue;  // points, lines and other element types
    if (tok.size() != 3 + ntags + nverts) throw Error(Errc::ParseError, "element line has wrong token count");
    std::vector<Index> conn;
    for (std::size_t j = 0; j < nverts; ++j) {
      auto it = node_index.find(parse_number<long>(tok[3 + ntags + j]));
      if (it == node_index.end()) throw Error(Errc::DanglingNode, "element references a node not in $Nodes");
      conn.push_back(it->second);
    }
    (type == 2 ? triangles : tets).push_back(std::move(conn));
  }

  if (!tets.empty()) {
    // Triangles that are facets of the tetrahedra are boundary annotations;
    // any other triangle makes the mesh genuinely mixed-dimensional.
    if (!triangles.empty()) {
      std::set<std::vector<Index>> facets;
      for (const auto& t : tets)
        for (std::size_t skip = 0; skip < 4; ++skip) {
          std::vector<Index> f;
          for (std::size_t j = 0; j < 4; ++j)
            if (j != skip) f.push_back(t[j]);
          facets.insert(sorted(std::move(f)));
        }
      for (const auto& tri : triangles)
        if (!facets.count(sorted(tri)))
          throw Error(Errc::MixedDimension, "file contains both triangle cells and tetrahedra");
    }
    return Mesh(3, ElementKind::Simplex, std::move(vertices), std::move(tets));
  }
  if (triangles.empty()) throw Error(Errc::ParseError, "no triangles or tetrahedra in $Elements");
  return Mesh(2, ElementKind::Simplex, std::move(vertices), std::move(triangles));
}

std::string write_msh(const Mesh& mesh) {
  if (mesh.kind() != ElementKind::Simplex) throw Error(Errc::InvalidArgument, "MSH export supports simplices only");
  std::ostringstream os;
  os << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n" << mesh.num_vertices() << '\n';
  for (Index i = 0; i < mesh.num_vertices(); ++i) {
    const Point& p = mesh.vertex(i);
    os << i + 1 << ' ' << format_exact(p.x()) << ' ' << format_exact(p.y()) << ' ' << format_exact(p.z()) << '\n';
  }
  os << "$EndNodes\n$Elements\n" << mesh.num_elements() << '\n';
  const int type = mesh.dim() == 2 ? 2 : 4;
  for (Index k = 0; k < mesh.num_elements(); ++k) {
    os << k + 1 << ' ' << type << " 2 0 1";
    for (Index v : mesh.element(k)) os << ' ' << v + 1;
    os << '\n';
  }
  os << "$EndElements\n";
  return os.str();
}

Mesh parse_poly(std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  for (auto line : split_lines(text)) {
    if (line.empty() || line.front() == '#') continue;
    rows.push_back(split_ws(line));
  }
  if (rows.empty() || rows[0].size() != 2) throw Error(Errc::BadCount, "first line must be 'V E'");
  const auto nv = parse_number<long>(rows[0][0], Errc::BadCount);
  const auto ne = parse_number<long>(rows[0][1], Errc::BadCount);
  if (nv < 3 || ne < 1 || rows.size() != static_cast<std::size_t>(1 + nv + ne))
    throw Error(Errc::BadCount, "vertex/element counts do not match the number of lines");

  std::vector<Point> vertices;
  for (long i = 0; i < nv; ++i) {
    const auto& r = rows[static_cast<std::size_t>(1 + i)];
    if (r.size() != 2) throw Error(Errc::BadCount, "vertex line must hold exactly 'x y'");
    vertices.emplace_back(parse_number<double>(r[0]), parse_number<double>(r[1]), 0.0);
  }
  std::vector<std::vector<Index>> elements;
  for (long i = 0; i < ne; ++i) {
    const auto& r = rows[static_cast<std::size_t>(1 + nv + i)];
    if (r.empty()) throw Error(Errc::BadCount, "empty element line");
    const auto k = parse_number<long>(r[0], Errc::BadCount);
    if (k < 3 || r.size() != static_cast<std::size_t>(k + 1))
      throw Error(Errc::BadCount, "element line vertex count does not match its prefix", i);
    std::vector<Index> poly;
    for (long j = 1; j <= k; ++j) poly.push_back(parse_number<Index>(r[static_cast<std::size_t>(j)]));
    elements.push_back(std::move(poly));
  }
  Mesh mesh(2, ElementKind::Polygon, std::move(vertices), std::move(elements));
  compute_geometry(mesh);  // orientation and star-shape checks
  return mesh;
}

std::string write_poly(const Mesh& mesh) {
  if (mesh.dim() != 2) throw Error(Errc::InvalidArgument, "polygon export supports 2D meshes only");
  std::ostringstream os;
  os << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  for (const auto& p : mesh.vertices()) os << format_exact(p.x()) << ' ' << format_exact(p.y()) << '\n';
  for (const auto& e : mesh.elements()) {
    os << e.size();
    for (Index v : e) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open mesh file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".msh")) return parse_msh(text);
  if (ends_with(".poly")) return parse_poly(text);
  throw Error(Errc::InvalidArgument, "unknown mesh file extension for '" + path + "' (expected .msh or .poly)");
}

}  // namespace patchdg
