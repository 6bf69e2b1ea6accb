// SPDX-License-Identifier: Apache-2.0
#include "patchdg/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "patchdg/parallel.hpp"
#include "patchdg/quadrature.hpp"

namespace patchdg {

const char* to_string(Problem p) noexcept { return p == Problem::Laplace ? "laplace" : "biharmonic"; }

const char* to_string(BoundaryCondition bc) noexcept {
  switch (bc) {
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Clamped: return "clamped";
    case BoundaryCondition::SimplySupported: return "simply_supported";
  }
  return "unknown";
}

void FormConfig::validate() const {
  if (!(eta > 0.0) || !(alpha > 0.0) || !(beta > 0.0))
    throw Error(Errc::InvalidArgument, "penalty parameters must be positive");
  if (problem == Problem::Laplace) {
    if (m < 1) throw Error(Errc::DegreeTooLow, "Laplace problem needs m >= 1");
    if (bc != BoundaryCondition::Dirichlet)
      throw Error(Errc::InvalidArgument, "Laplace problem supports the Dirichlet condition only");
  } else {
    if (m < 2) throw Error(Errc::DegreeTooLow, "biharmonic problem needs m >= 2");
    if (bc == BoundaryCondition::Dirichlet)
      throw Error(Errc::InvalidArgument, "biharmonic problem needs clamped or simply_supported");
  }
}

namespace {

int volume_order(const Space& space) { return std::min(std::max(2 * space.m, 1), max_order(space.dim)); }
int face_order(const Space& space) { return std::min(std::max(2 * space.m, 1), max_order(space.dim - 1)); }

std::vector<Point> face_points(const Mesh& mesh, const Face& f) {
  std::vector<Point> pts;
  for (Index v : f.vertices) pts.push_back(mesh.vertex(v));
  return pts;
}

// Union of the two patches sharing a face, with positions of each side's
// members inside the union.
struct FaceDofs {
  std::vector<Index> dofs;
  std::vector<Eigen::Index> plus_pos, minus_pos;
};

FaceDofs face_dofs(const Space& space, const Face& f) {
  FaceDofs out;
  const auto& plus = space.basis(f.plus).patch.members;
  out.dofs = plus;
  if (!f.boundary()) {
    for (Index j : space.basis(f.minus).patch.members)
      if (std::find(out.dofs.begin(), out.dofs.end(), j) == out.dofs.end()) out.dofs.push_back(j);
  }
  auto position = [&](Index j) {
    return static_cast<Eigen::Index>(std::find(out.dofs.begin(), out.dofs.end(), j) - out.dofs.begin());
  };
  for (Index j : plus) out.plus_pos.push_back(position(j));
  if (!f.boundary())
    for (Index j : space.basis(f.minus).patch.members) out.minus_pos.push_back(position(j));
  return out;
}

// Scatter per-node values of one side into a union-sized vector.
void scatter(Eigen::VectorXd& dst, const std::vector<Eigen::Index>& pos, const Eigen::VectorXd& src, double sign) {
  for (std::size_t i = 0; i < pos.size(); ++i) dst(pos[i]) += sign * src(static_cast<Eigen::Index>(i));
}

struct LocalBlock {
  std::vector<Index> dofs;
  Eigen::MatrixXd matrix;
};

// Assembles volume blocks (one per element) then face blocks (one per face),
// computed independently and merged in element/face order.
template <class VolumeKernel, class FaceKernel>
SymSparseMatrix assemble(const Mesh& mesh, const FaceTopology& topology, const Space& space, VolumeKernel&& volume,
                         FaceKernel&& face) {
  const Index ne = mesh.num_elements();
  const Index nf = topology.num_faces();
  std::vector<LocalBlock> blocks(static_cast<std::size_t>(ne + nf));
  parallel_for(ne + nf, [&](Index i) {
    LocalBlock& blk = blocks[static_cast<std::size_t>(i)];
    if (i < ne) {
      blk.dofs = space.basis(i).patch.members;
      blk.matrix = volume(i);
    } else {
      const Face& f = topology.faces[static_cast<std::size_t>(i - ne)];
      const FaceDofs fd = face_dofs(space, f);
      blk.dofs = fd.dofs;
      blk.matrix = face(f, fd);
    }
  });
  SymSparseBuilder builder(space.num_dofs());
  for (const auto& blk : blocks)
    if (blk.matrix.size() > 0) builder.add(blk.dofs, blk.matrix);
  return builder.build();
}

// Symmetric rank-2 update M += w (a b^T + b a^T).
void sym_update(Eigen::MatrixXd& m, double w, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  m.noalias() += w * (a * b.transpose() + b * a.transpose());
}

}  // namespace

SymSparseMatrix assemble_laplace(const Mesh& mesh, const FaceTopology& topology, const Space& space,
                                 const FormConfig& config) {
  if (config.problem != Problem::Laplace) throw Error(Errc::InvalidArgument, "assemble_laplace needs a Laplace config");
  config.validate();
  const int vorder = volume_order(space);
  const int forder = face_order(space);
  const double eta = config.eta_effective();

  auto volume = [&](Index k) {
    const LocalBasis& b = space.basis(k);
    const auto nn = static_cast<Eigen::Index>(b.patch.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nn, nn);
    for (const auto& s : space.geometry[static_cast<std::size_t>(k)].sub_simplices) {
      const MappedRule q = map_rule(simplex_rule(space.dim, vorder), s.points());
      for (std::size_t i = 0; i < q.points.size(); ++i) {
        const ShapeEval e = eval_shape(b, q.points[i], 1);
        local.noalias() += q.weights[i] * e.gradient * e.gradient.transpose();
      }
    }
    return local;
  };

  auto face = [&](const Face& f, const FaceDofs& fd) {
    const auto nu = static_cast<Eigen::Index>(fd.dofs.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nu, nu);
    const MappedRule q = face_rule(space.dim, forder, face_points(mesh, f));
    const Eigen::Vector3d& n = f.normal;
    const double penalty = eta / f.diameter;
    const double avg = f.boundary() ? 1.0 : 0.5;
    Eigen::VectorXd jump(nu), flux(nu);
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      jump.setZero();
      flux.setZero();
      const ShapeEval ep = eval_shape(space.basis(f.plus), q.points[i], 1);
      scatter(jump, fd.plus_pos, ep.value, 1.0);
      scatter(flux, fd.plus_pos, ep.gradient * n.head(space.dim), avg);
      if (!f.boundary()) {
        const ShapeEval em = eval_shape(space.basis(f.minus), q.points[i], 1);
        scatter(jump, fd.minus_pos, em.value, -1.0);
        scatter(flux, fd.minus_pos, em.gradient * n.head(space.dim), avg);
      }
      // [v] = n (v+ - v-), {grad v}.n = average normal flux
      const double w = q.weights[i];
      sym_update(local, -w, flux, jump);
      local.noalias() += (w * penalty) * jump * jump.transpose();
    }
    return local;
  };

  return assemble(mesh, topology, space, volume, face);
}

SymSparseMatrix assemble_biharmonic(const Mesh& mesh, const FaceTopology& topology, const Space& space,
                                    const FormConfig& config) {
  if (config.problem != Problem::Biharmonic)
    throw Error(Errc::InvalidArgument, "assemble_biharmonic needs a biharmonic config");
  config.validate();
  const int vorder = volume_order(space);
  const int forder = face_order(space);
  const double alpha = config.alpha_effective();
  const double beta = config.beta_effective();
  const bool simply_supported = config.bc == BoundaryCondition::SimplySupported;

  auto volume = [&](Index k) {
    const LocalBasis& b = space.basis(k);
    const auto nn = static_cast<Eigen::Index>(b.patch.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nn, nn);
    for (const auto& s : space.geometry[static_cast<std::size_t>(k)].sub_simplices) {
      const MappedRule q = map_rule(simplex_rule(space.dim, vorder), s.points());
      for (std::size_t i = 0; i < q.points.size(); ++i) {
        const ShapeEval e = eval_shape(b, q.points[i], 2);
        local.noalias() += q.weights[i] * e.laplacian * e.laplacian.transpose();
      }
    }
    return local;
  };

  auto face = [&](const Face& f, const FaceDofs& fd) {
    const auto nu = static_cast<Eigen::Index>(fd.dofs.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nu, nu);
    const MappedRule q = face_rule(space.dim, forder, face_points(mesh, f));
    const Eigen::VectorXd n = f.normal.head(space.dim);
    const double h = f.diameter;
    const double avg = f.boundary() ? 1.0 : 0.5;
    // On simply supported boundaries Delta u = 0 is natural: only the value
    // jump terms remain.
    const bool slope_terms = !(f.boundary() && simply_supported);
    Eigen::VectorXd jump(nu), slope_jump(nu), avg_lap(nu), avg_flux3(nu);
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      jump.setZero();
      slope_jump.setZero();
      avg_lap.setZero();
      avg_flux3.setZero();
      const ShapeEval ep = eval_shape(space.basis(f.plus), q.points[i], 3);
      scatter(jump, fd.plus_pos, ep.value, 1.0);
      scatter(slope_jump, fd.plus_pos, ep.gradient * n, 1.0);
      scatter(avg_lap, fd.plus_pos, ep.laplacian, avg);
      scatter(avg_flux3, fd.plus_pos, ep.grad_laplacian * n, avg);
      if (!f.boundary()) {
        const ShapeEval em = eval_shape(space.basis(f.minus), q.points[i], 3);
        scatter(jump, fd.minus_pos, em.value, -1.0);
        scatter(slope_jump, fd.minus_pos, em.gradient * n, -1.0);
        scatter(avg_lap, fd.minus_pos, em.laplacian, avg);
        scatter(avg_flux3, fd.minus_pos, em.grad_laplacian * n, avg);
      }
      const double w = q.weights[i];
      sym_update(local, w, jump, avg_flux3);
      local.noalias() += (w * alpha / (h * h * h)) * jump * jump.transpose();
      if (slope_terms) {
        sym_update(local, -w, avg_lap, slope_jump);
        local.noalias() += (w * beta / h) * slope_jump * slope_jump.transpose();
      }
    }
    return local;
  };

  return assemble(mesh, topology, space, volume, face);
}

SymSparseMatrix assemble_stiffness(const Mesh& mesh, const FaceTopology& topology, const Space& space,
                                   const FormConfig& config) {
  return config.problem == Problem::Laplace ? assemble_laplace(mesh, topology, space, config)
                                            : assemble_biharmonic(mesh, topology, space, config);
}

SymSparseMatrix assemble_mass(const Mesh& mesh, const Space& space) {
  const int vorder = volume_order(space);
  FaceTopology no_faces;
  auto volume = [&](Index k) {
    const LocalBasis& b = space.basis(k);
    const auto nn = static_cast<Eigen::Index>(b.patch.size());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nn, nn);
    for (const auto& s : space.geometry[static_cast<std::size_t>(k)].sub_simplices) {
      const MappedRule q = map_rule(simplex_rule(space.dim, vorder), s.points());
      for (std::size_t i = 0; i < q.points.size(); ++i) {
        const ShapeEval e = eval_shape(b, q.points[i], 0);
        local.noalias() += q.weights[i] * e.value * e.value.transpose();
      }
    }
    return local;
  };
  auto face = [](const Face&, const FaceDofs&) { return Eigen::MatrixXd(); };
  return assemble(mesh, no_faces, space, volume, face);
}

Eigen::VectorXd assemble_load(const Space& space, const std::function<double(const Point&)>& f) {
  const int order = std::min(2 * space.m + 2, max_order(space.dim));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.num_dofs());
  for (Index k = 0; k < space.num_dofs(); ++k) {
    const LocalBasis& basis = space.basis(k);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.patch.size()));
    for (const auto& s : space.geometry[static_cast<std::size_t>(k)].sub_simplices) {
      const MappedRule q = map_rule(simplex_rule(space.dim, order), s.points());
      for (std::size_t i = 0; i < q.points.size(); ++i)
        local += q.weights[i] * f(q.points[i]) * eval_shape(basis, q.points[i], 0).value;
    }
    for (std::size_t j = 0; j < basis.patch.members.size(); ++j) b(basis.patch.members[j]) += local(static_cast<Eigen::Index>(j));
  }
  return b;
}

}  // namespace patchdg
