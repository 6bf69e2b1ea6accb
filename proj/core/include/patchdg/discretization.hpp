// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "patchdg/assembly.hpp"
#include "patchdg/mesh.hpp"
#include "patchdg/reconstruction.hpp"

namespace patchdg {

/// Mesh, faces and reconstructed space of one run.
struct Discretization {
  Mesh mesh;
  FaceTopology topology;
  Space space;
  double h = 0.0;  // largest element diameter

  Index num_dofs() const noexcept { return space.num_dofs(); }
};

Discretization discretize(Mesh mesh, int m, std::size_t patch_size = 0);

/// Stiffness and mass of a discretization for one form.
struct SystemMatrices {
  SymSparseMatrix stiffness;
  SymSparseMatrix mass;
};

SystemMatrices assemble_system(const Discretization& disc, const FormConfig& config);

}  // namespace patchdg
