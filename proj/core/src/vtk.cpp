// SPDX-License-Identifier: Apache-2.0
#include "patchdg/vtk.hpp"

#include <fstream>

#include "patchdg/csv.hpp"

namespace patchdg {

void write_vtk(std::ostream& os, const Mesh& mesh, const Space& space, const Eigen::VectorXd& dofs,
               const std::string& name) {
  if (dofs.size() != space.num_dofs()) throw Error(Errc::InvalidArgument, "vector length does not match the space");
  std::size_t npts = 0, conn = 0;
  for (const auto& e : mesh.elements()) {
    npts += e.size();
    conn += e.size() + 1;
  }
  os << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << npts << " double\n";
  for (const auto& e : mesh.elements())
    for (Index v : e) {
      const Point& x = mesh.vertex(v);
      os << format_exact(x[0]) << ' ' << format_exact(x[1]) << ' ' << format_exact(x[2]) << '\n';
    }
  os << "CELLS " << mesh.num_elements() << ' ' << conn << '\n';
  std::size_t next = 0;
  for (const auto& e : mesh.elements()) {
    os << e.size();
    for (std::size_t i = 0; i < e.size(); ++i) os << ' ' << next++;
    os << '\n';
  }
  const int type = mesh.kind() == ElementKind::Polygon ? 7 : (mesh.dim() == 2 ? 5 : 10);
  os << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (Index k = 0; k < mesh.num_elements(); ++k) os << type << '\n';

  os << "POINT_DATA " << npts << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (Index k = 0; k < mesh.num_elements(); ++k)
    for (Index v : mesh.element(k)) os << format_exact(evaluate(space, k, mesh.vertex(v), dofs)) << '\n';
  os << "CELL_DATA " << mesh.num_elements() << "\nSCALARS " << name << "_dof double 1\nLOOKUP_TABLE default\n";
  for (Index k = 0; k < mesh.num_elements(); ++k) os << format_exact(dofs[k]) << '\n';
}

void export_vtk(const std::string& path, const Mesh& mesh, const Space& space, const Eigen::VectorXd& dofs,
                const std::string& name) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot open " + path);
  write_vtk(out, mesh, space, dofs, name);
  out.flush();
  if (!out) throw Error(Errc::IoError, "failed writing " + path);
}

}  // namespace patchdg
