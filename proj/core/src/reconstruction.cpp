// SPDX-License-Identifier: Apache-2.0
#include "patchdg/reconstruction.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "patchdg/csv.hpp"
#include "patchdg/parallel.hpp"

namespace patchdg {

namespace {

double falling_power(double y, int e, int d) {
  if (d > e) return 0.0;
  double c = 1.0;
  for (int i = 0; i < d; ++i) c *= e - i;
  return c * std::pow(y, e - d);
}

}  // namespace

MonomialBasis::MonomialBasis(int m, int dim) : m_(m), dim_(dim) {
  if (m < 0 || dim < 1 || dim > 3) throw Error(Errc::InvalidArgument, "monomial basis needs m >= 0, dim in 1..3");
  for (int deg = 0; deg <= m; ++deg) {
    if (dim == 1) {
      exponents_.push_back({deg, 0, 0});
    } else if (dim == 2) {
      for (int a = deg; a >= 0; --a) exponents_.push_back({a, deg - a, 0});
    } else {
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b) exponents_.push_back({a, b, deg - a - b});
    }
  }
}

Eigen::VectorXd MonomialBasis::derivative(const Point& y, const std::array<int, 3>& alpha) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(exponents_.size()));
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto& e = exponents_[i];
    double v = 1.0;
    for (int c = 0; c < dim_ && v != 0.0; ++c) v *= falling_power(y(c), e[c], alpha[c]);
    out(static_cast<Eigen::Index>(i)) = v;
  }
  return out;
}

LocalBasis fit_local(const Patch& patch, int m, int dim) {
  const MonomialBasis mono(m, dim);
  const auto np = static_cast<Eigen::Index>(mono.size());
  const auto nn = static_cast<Eigen::Index>(patch.nodes.size());
  LocalBasis basis;
  basis.element = patch.center;
  basis.patch = patch;
  basis.m = m;
  basis.dim = dim;
  basis.origin = patch.nodes.front();
  basis.scale = patch.diameter > 0.0 ? patch.diameter : 1.0;
  if (nn < np)
    throw Error(Errc::RankDeficient,
                "patch has " + std::to_string(nn) + " nodes, fewer than dim P^m = " + std::to_string(np),
                patch.center);

  Eigen::MatrixXd vander(nn, np);
  for (Eigen::Index j = 0; j < nn; ++j)
    vander.row(j) = mono.values((patch.nodes[static_cast<std::size_t>(j)] - basis.origin) / basis.scale).transpose();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vander);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < np)
    throw Error(Errc::RankDeficient,
                "sampling nodes are not unisolvent for degree " + std::to_string(m) + " (rank " +
                    std::to_string(qr.rank()) + " < " + std::to_string(np) + ")",
                patch.center);
  const Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(nn, nn));  // np x nn
  basis.coeffs = pinv.transpose();
  return basis;
}

ShapeEval eval_shape(const LocalBasis& basis, const Point& x, int deriv) {
  const MonomialBasis mono(basis.m, basis.dim);
  const int dim = basis.dim;
  const Point y = (x - basis.origin) / basis.scale;
  const double inv = 1.0 / basis.scale;
  const auto nn = basis.coeffs.rows();
  ShapeEval out;
  out.value = basis.coeffs * mono.values(y);
  if (deriv >= 1) {
    out.gradient.resize(nn, dim);
    for (int c = 0; c < dim; ++c) {
      std::array<int, 3> a{0, 0, 0};
      a[static_cast<std::size_t>(c)] = 1;
      out.gradient.col(c) = basis.coeffs * mono.derivative(y, a) * inv;
    }
  }
  if (deriv >= 2) {
    out.hessian.resize(nn, dim * dim);
    out.laplacian = Eigen::VectorXd::Zero(nn);
    for (int r = 0; r < dim; ++r)
      for (int c = r; c < dim; ++c) {
        std::array<int, 3> a{0, 0, 0};
        ++a[static_cast<std::size_t>(r)];
        ++a[static_cast<std::size_t>(c)];
        const Eigen::VectorXd h = basis.coeffs * mono.derivative(y, a) * (inv * inv);
        out.hessian.col(r * dim + c) = h;
        out.hessian.col(c * dim + r) = h;
        if (r == c) out.laplacian += h;
      }
  }
  if (deriv >= 3) {
    out.grad_laplacian = Eigen::MatrixXd::Zero(nn, dim);
    Eigen::VectorXd acc(static_cast<Eigen::Index>(mono.size()));
    for (int c = 0; c < dim; ++c) {
      acc.setZero();
      for (int j = 0; j < dim; ++j) {
        std::array<int, 3> a{0, 0, 0};
        ++a[static_cast<std::size_t>(c)];
        a[static_cast<std::size_t>(j)] += 2;
        acc += mono.derivative(y, a);
      }
      out.grad_laplacian.col(c) = basis.coeffs * acc * (inv * inv * inv);
    }
  }
  return out;
}

Space build_space(const Mesh& mesh, const FaceTopology& topology, int m, std::size_t patch_size) {
  Space space;
  space.m = m;
  space.dim = mesh.dim();
  space.geometry = compute_geometry(mesh);
  const std::size_t t = patch_size == 0 ? default_patch_size(m, mesh.dim()) : patch_size;
  const Index n = mesh.num_elements();
  space.bases.resize(static_cast<std::size_t>(n));

  parallel_for(n, [&](Index k) {
    Patch patch = build_patch(mesh, topology, space.geometry, k, t);
    for (int attempt = 0;; ++attempt) {
      try {
        space.bases[static_cast<std::size_t>(k)] = fit_local(patch, m, mesh.dim());
        return;
      } catch (const Error& e) {
        if (e.code() != Errc::RankDeficient || attempt == 3 || !grow_ring(patch, mesh, topology, space.geometry))
          throw;
      }
    }
  });

  space.support.assign(static_cast<std::size_t>(n), {});
  for (Index k = 0; k < n; ++k)
    for (Index j : space.bases[static_cast<std::size_t>(k)].patch.members)
      space.support[static_cast<std::size_t>(j)].push_back(k);
  return space;
}

Eigen::VectorXd interpolate(const Space& space, const ScalarField& g) {
  Eigen::VectorXd out(space.num_dofs());
  for (Index k = 0; k < space.num_dofs(); ++k) out(k) = g(space.geometry[static_cast<std::size_t>(k)].barycenter);
  return out;
}

Eigen::VectorXd gather(const LocalBasis& basis, const Eigen::VectorXd& dofs) {
  Eigen::VectorXd local(static_cast<Eigen::Index>(basis.patch.members.size()));
  for (std::size_t j = 0; j < basis.patch.members.size(); ++j)
    local(static_cast<Eigen::Index>(j)) = dofs(basis.patch.members[j]);
  return local;
}

double evaluate(const Space& space, Index element, const Point& x, const Eigen::VectorXd& dofs) {
  const LocalBasis& b = space.basis(element);
  return eval_shape(b, x, 0).value.dot(gather(b, dofs));
}

void write_coefficients(std::ostream& os, const Space& space) {
  CsvWriter csv(os);
  csv.header({"element", "node", "ex", "ey", "ez", "coefficient"});
  for (Index k = 0; k < space.num_dofs(); ++k) {
    const LocalBasis& b = space.basis(k);
    const MonomialBasis mono(b.m, b.dim);
    for (Eigen::Index j = 0; j < b.coeffs.rows(); ++j)
      for (std::size_t a = 0; a < mono.size(); ++a) {
        const auto& e = mono.exponents()[a];
        csv.cell(static_cast<long long>(k))
            .cell(static_cast<long long>(b.patch.members[static_cast<std::size_t>(j)]))
            .cell(static_cast<long long>(e[0]))
            .cell(static_cast<long long>(e[1]))
            .cell(static_cast<long long>(e[2]))
            .cell(format_exact(b.coeffs(j, static_cast<Eigen::Index>(a))));
        csv.end_row();
      }
  }
}

}  // namespace patchdg
