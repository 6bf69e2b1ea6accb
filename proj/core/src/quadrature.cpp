// SPDX-License-Identifier: Apache-2.0
#include "patchdg/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

namespace patchdg {

int max_order(int dim) {
  switch (dim) {
    case 1: return kMaxOrder1D;
    case 2: return kMaxOrder2D;
    case 3: return kMaxOrder3D;
    default: throw Error(Errc::InvalidArgument, "quadrature dimension must be 1, 2 or 3");
  }
}

// Golub-Welsch on the monic Jacobi recurrence with beta = 0, mapped from
// [-1,1] with s = (1 + x) / 2 so that (1 - x)^a becomes 2^a (1 - s)^a.
void gauss_jacobi_01(int npoints, int a, std::vector<double>& nodes, std::vector<double>& weights) {
  const double alpha = a;
  const double beta = 0.0;
  const int n = npoints;
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    diag(k) = k == 0 ? (beta - alpha) / (alpha + beta + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    const double b = 4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta) / (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(b);
  }
  // mu0 = int_{-1}^{1} (1-x)^a dx = 2^{a+1}/(a+1)
  const double mu0 = std::pow(2.0, alpha + 1.0) / (alpha + 1.0);

  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 1) {
    nodes[0] = 0.5 * (1.0 + diag(0));
    weights[0] = mu0 / std::pow(2.0, alpha + 1.0);
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    nodes[static_cast<std::size_t>(k)] = 0.5 * (1.0 + es.eigenvalues()(k));
    weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0 / std::pow(2.0, alpha + 1.0);
  }
}

namespace {

QuadRule build_rule(int dim, int order) {
  const int n = (order + 2) / 2;  // 2n - 1 >= order
  QuadRule rule;
  rule.dim = dim;
  rule.order = order;
  std::vector<double> x0, w0, x1, w1, x2, w2;
  if (dim == 1) {
    gauss_jacobi_01(n, 0, x0, w0);
    for (int i = 0; i < n; ++i) {
      rule.points.emplace_back(x0[i], 0.0, 0.0);
      rule.weights.push_back(w0[i]);
    }
  } else if (dim == 2) {
    // x = s, y = (1 - s) r, dx dy = (1 - s) ds dr
    gauss_jacobi_01(n, 1, x0, w0);
    gauss_jacobi_01(n, 0, x1, w1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double s = x0[i], r = x1[j];
        rule.points.emplace_back(s, (1.0 - s) * r, 0.0);
        rule.weights.push_back(w0[i] * w1[j]);
      }
  } else {
    // x = s, y = (1 - s) r, z = (1 - s)(1 - r) q, Jacobian (1 - s)^2 (1 - r)
    gauss_jacobi_01(n, 2, x0, w0);
    gauss_jacobi_01(n, 1, x1, w1);
    gauss_jacobi_01(n, 0, x2, w2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double s = x0[i], r = x1[j], q = x2[k];
          rule.points.emplace_back(s, (1.0 - s) * r, (1.0 - s) * (1.0 - r) * q);
          rule.weights.push_back(w0[i] * w1[j] * w2[k]);
        }
  }
  return rule;
}

}  // namespace

const QuadRule& simplex_rule(int dim, int order) {
  const int cap = max_order(dim);
  if (order < 0 || order > cap)
    throw Error(Errc::OrderUnsupported,
                "quadrature order " + std::to_string(order) + " unsupported in dimension " + std::to_string(dim));
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<QuadRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::make_unique<QuadRule>(build_rule(dim, order));
  return *slot;
}

MappedRule map_rule(const QuadRule& rule, std::span<const Point> simplex) {
  if (static_cast<int>(simplex.size()) != rule.dim + 1)
    throw Error(Errc::InvalidArgument, "simplex vertex count does not match rule dimension");
  Eigen::Matrix<double, 3, Eigen::Dynamic> jac(3, rule.dim);
  double diam = 0.0;
  for (int c = 0; c < rule.dim; ++c) {
    jac.col(c) = simplex[static_cast<std::size_t>(c + 1)] - simplex[0];
    diam = std::max(diam, jac.col(c).norm());
  }
  const double factor = std::sqrt(std::max(0.0, (jac.transpose() * jac).determinant()));
  if (!(factor > 1e-14 * std::pow(diam, rule.dim)))
    throw Error(Errc::DegenerateSimplex, "simplex has numerically zero measure");

  MappedRule out;
  out.points.reserve(rule.points.size());
  out.weights.reserve(rule.weights.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    out.points.emplace_back(simplex[0] + jac * rule.points[q].head(rule.dim));
    out.weights.push_back(rule.weights[q] * factor);
  }
  return out;
}

MappedRule face_rule(int mesh_dim, int order, std::span<const Point> face) {
  return map_rule(simplex_rule(mesh_dim - 1, order), face);
}

}  // namespace patchdg
