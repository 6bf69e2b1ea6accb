// SPDX-License-Identifier: Apache-2.0
#include "patchdg/discretization.hpp"

namespace patchdg {

Discretization discretize(Mesh mesh, int m, std::size_t patch_size) {
  Discretization d;
  d.mesh = std::move(mesh);
  d.topology = build_topology(d.mesh);
  d.space = build_space(d.mesh, d.topology, m, patch_size);
  d.h = mesh_size(d.space.geometry);
  return d;
}

SystemMatrices assemble_system(const Discretization& disc, const FormConfig& config) {
  config.validate();
  return {assemble_stiffness(disc.mesh, disc.topology, disc.space, config), assemble_mass(disc.mesh, disc.space)};
}

}  // namespace patchdg
