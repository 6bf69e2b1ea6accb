// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>

#include "patchdg/reconstruction.hpp"

namespace patchdg {

/// Legacy ASCII VTK unstructured grid. Vertices are repeated per element so
/// the discontinuous field R(dofs) can be shown as point data; the raw DOF
/// values go to cell data.
void write_vtk(std::ostream& os, const Mesh& mesh, const Space& space, const Eigen::VectorXd& dofs,
               const std::string& name = "u");

/// Throws IoError when the file cannot be written.
void export_vtk(const std::string& path, const Mesh& mesh, const Space& space, const Eigen::VectorXd& dofs,
                const std::string& name = "u");

}  // namespace patchdg
