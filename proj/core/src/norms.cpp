// SPDX-License-Identifier: Apache-2.0
#include "patchdg/norms.hpp"

#include <cmath>

#include "patchdg/quadrature.hpp"

namespace patchdg {

namespace {

// Value, gradient and Laplacian of every field at one point of one element.
struct PointValues {
  Eigen::VectorXd value;
  Eigen::MatrixXd gradient;  // fields x dim
  Eigen::VectorXd laplacian;
};

PointValues eval_fields(const Space& space, Index element, const Point& x, const SmoothFunction* exact,
                        std::span<const FieldTerm> fields, int deriv) {
  const auto nf = static_cast<Eigen::Index>(fields.size());
  const int dim = space.dim;
  PointValues pv{Eigen::VectorXd::Zero(nf), Eigen::MatrixXd::Zero(nf, dim), Eigen::VectorXd::Zero(nf)};
  const LocalBasis& b = space.basis(element);

  bool have_exact = false, have_dofs = false;
  for (const auto& f : fields) {
    have_exact |= f.exact_weight != 0.0;
    have_dofs |= f.dofs != nullptr;
  }
  double u = 0.0, lap = 0.0;
  Point grad = Point::Zero();
  if (have_exact) {
    if (!exact) throw Error(Errc::InvalidArgument, "field references an exact function that was not supplied");
    u = exact->value(x);
    if (deriv >= 1) grad = exact->gradient(x);
    if (deriv >= 2) lap = exact->hessian(x).trace();
  }
  ShapeEval se;
  if (have_dofs) se = eval_shape(b, x, deriv);
  for (Eigen::Index i = 0; i < nf; ++i) {
    const FieldTerm& f = fields[static_cast<std::size_t>(i)];
    if (f.exact_weight != 0.0) {
      pv.value(i) += f.exact_weight * u;
      if (deriv >= 1) pv.gradient.row(i) += f.exact_weight * grad.head(dim).transpose();
      if (deriv >= 2) pv.laplacian(i) += f.exact_weight * lap;
    }
    if (f.dofs) {
      const Eigen::VectorXd local = gather(b, *f.dofs) * f.dofs_weight;
      pv.value(i) += se.value.dot(local);
      if (deriv >= 1) pv.gradient.row(i) += (se.gradient.transpose() * local).transpose();
      if (deriv >= 2) pv.laplacian(i) += se.laplacian.dot(local);
    }
  }
  return pv;
}

}  // namespace

Eigen::MatrixXd field_gram(const Mesh& mesh, const FaceTopology& topology, const Space& space,
                           const SmoothFunction* exact, std::span<const FieldTerm> fields, NormKind kind,
                           BoundaryCondition bc) {
  const auto nf = static_cast<Eigen::Index>(fields.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nf, nf);
  const int dim = space.dim;
  const int vorder = std::min(2 * space.m + 2, max_order(dim));
  const int deriv = kind == NormKind::L2 ? 0 : kind == NormKind::Energy2 ? 2 : 1;

  for (Index k = 0; k < space.num_dofs(); ++k) {
    for (const auto& s : space.geometry[static_cast<std::size_t>(k)].sub_simplices) {
      const MappedRule q = map_rule(simplex_rule(dim, vorder), s.points());
      for (std::size_t i = 0; i < q.points.size(); ++i) {
        const PointValues pv = eval_fields(space, k, q.points[i], exact, fields, deriv);
        const double w = q.weights[i];
        switch (kind) {
          case NormKind::L2: gram.noalias() += w * pv.value * pv.value.transpose(); break;
          case NormKind::BrokenH1:
          case NormKind::Energy1: gram.noalias() += w * pv.gradient * pv.gradient.transpose(); break;
          case NormKind::Energy2: gram.noalias() += w * pv.laplacian * pv.laplacian.transpose(); break;
        }
      }
    }
  }
  if (kind != NormKind::Energy1 && kind != NormKind::Energy2) return gram;

  const int forder = std::min(2 * space.m + 2, max_order(dim - 1));
  const int face_deriv = kind == NormKind::Energy2 ? 1 : 0;
  Eigen::VectorXd jump(nf), slope(nf);
  for (const Face& f : topology.faces) {
    std::vector<Point> pts;
    for (Index v : f.vertices) pts.push_back(mesh.vertex(v));
    const MappedRule q = face_rule(dim, forder, pts);
    const Eigen::VectorXd n = f.normal.head(dim);
    const double h = f.diameter;
    const bool slope_terms =
        kind == NormKind::Energy2 && !(f.boundary() && bc == BoundaryCondition::SimplySupported);
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      const PointValues plus = eval_fields(space, f.plus, q.points[i], exact, fields, face_deriv);
      jump = plus.value;
      if (face_deriv) slope = plus.gradient * n;
      if (!f.boundary()) {
        const PointValues minus = eval_fields(space, f.minus, q.points[i], exact, fields, face_deriv);
        jump -= minus.value;
        if (face_deriv) slope -= minus.gradient * n;
      }
      const double w = q.weights[i];
      const double jump_scale = kind == NormKind::Energy1 ? 1.0 / h : 1.0 / (h * h * h);
      gram.noalias() += (w * jump_scale) * jump * jump.transpose();
      if (slope_terms) gram.noalias() += (w / h) * slope * slope.transpose();
    }
  }
  return gram;
}

double field_norm(const Mesh& mesh, const FaceTopology& topology, const Space& space, const SmoothFunction* exact,
                  const Eigen::VectorXd* dofs, NormKind kind, BoundaryCondition bc) {
  const FieldTerm term{exact ? 1.0 : 0.0, dofs, -1.0};
  const Eigen::MatrixXd g = field_gram(mesh, topology, space, exact, std::span(&term, 1), kind, bc);
  return std::sqrt(std::max(0.0, g(0, 0)));
}

double energy_norm(const Mesh& mesh, const FaceTopology& topology, const Space& space, const SmoothFunction* exact,
                   const Eigen::VectorXd* dofs, int p, BoundaryCondition bc) {
  if (p != 1 && p != 2) throw Error(Errc::InvalidArgument, "energy norm order must be 1 or 2");
  return field_norm(mesh, topology, space, exact, dofs, p == 1 ? NormKind::Energy1 : NormKind::Energy2, bc);
}

InterpolationErrors interpolation_errors(const Space& space, const SmoothFunction& u, const Eigen::VectorXd& dofs) {
  static const Mesh kNoMesh;
  static const FaceTopology kNoFaces;
  return {field_norm(kNoMesh, kNoFaces, space, &u, &dofs, NormKind::L2),
          field_norm(kNoMesh, kNoFaces, space, &u, &dofs, NormKind::BrokenH1)};
}

}  // namespace patchdg
