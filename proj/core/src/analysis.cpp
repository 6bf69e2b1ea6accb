// SPDX-License-Identifier: Apache-2.0
#include "patchdg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

namespace patchdg {

namespace {

using std::numbers::pi;

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

NormKind energy_kind(int p) { return p == 1 ? NormKind::Energy1 : NormKind::Energy2; }

int spectrum_dim(Domain d) { return d == Domain::SquarePi ? 2 : 3; }

}  // namespace

ExactSpectrum exact_spectrum(Domain domain, int p, std::size_t count) {
  if (p != 1 && p != 2) throw Error(Errc::InvalidArgument, "spectrum order must be 1 or 2");
  const int dim = spectrum_dim(domain);
  // every (i,j[,k]) with value at most that of the c^dim block fits below `bound`
  int c = 1;
  while (static_cast<std::size_t>(std::pow(c, dim)) < count) ++c;
  const int bound = static_cast<int>(std::ceil(c * std::sqrt(static_cast<double>(dim)))) + 1;

  struct Mode {
    long sum;
    std::array<int, 3> label;
  };
  std::vector<Mode> modes;
  for (int i = 1; i <= bound; ++i)
    for (int j = 1; j <= bound; ++j) {
      if (dim == 2) {
        modes.push_back({long(i) * i + long(j) * j, {i, j, 0}});
      } else {
        for (int k = 1; k <= bound; ++k) modes.push_back({long(i) * i + long(j) * j + long(k) * k, {i, j, k}});
      }
    }
  std::sort(modes.begin(), modes.end(),
            [](const Mode& a, const Mode& b) { return a.sum != b.sum ? a.sum < b.sum : a.label < b.label; });

  ExactSpectrum s;
  s.domain = domain;
  s.p = p;
  const double scale = domain == Domain::SquarePi ? 1.0 : pi * pi;
  for (std::size_t i = 0; i < count && i < modes.size(); ++i) {
    const double lam = scale * static_cast<double>(modes[i].sum);
    s.values.push_back(p == 1 ? lam : lam * lam);
    s.labels.push_back(modes[i].label);
  }
  return s;
}

std::pair<std::size_t, std::size_t> ExactSpectrum::cluster(std::size_t index) const {
  std::size_t first = index, last = index + 1;
  while (first > 0 && same_value(values[first - 1], values[index])) --first;
  while (last < values.size() && same_value(values[last], values[index])) ++last;
  return {first, last};
}

SmoothFunction ExactSpectrum::eigenfunction(std::size_t index) const {
  const int dim = spectrum_dim(domain);
  std::array<double, 3> w{0, 0, 0};
  for (int d = 0; d < dim; ++d) w[d] = (domain == Domain::SquarePi ? 1.0 : pi) * labels[index][d];
  const double c = domain == Domain::SquarePi ? 2.0 / pi : 2.0 * std::sqrt(2.0);

  SmoothFunction f;
  f.value = [w, c, dim](const Point& x) {
    double v = c;
    for (int d = 0; d < dim; ++d) v *= std::sin(w[d] * x[d]);
    return v;
  };
  f.gradient = [w, c, dim](const Point& x) {
    Point g = Point::Zero();
    for (int d = 0; d < dim; ++d) {
      double v = c * w[d] * std::cos(w[d] * x[d]);
      for (int e = 0; e < dim; ++e)
        if (e != d) v *= std::sin(w[e] * x[e]);
      g[d] = v;
    }
    return g;
  };
  f.hessian = [w, c, dim](const Point& x) {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    std::array<double, 3> s{}, co{};
    for (int d = 0; d < dim; ++d) {
      s[d] = std::sin(w[d] * x[d]);
      co[d] = std::cos(w[d] * x[d]);
    }
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        double v = c;
        for (int e = 0; e < dim; ++e) {
          if (a == b && e == a)
            v *= -w[e] * w[e] * s[e];
          else if (e == a || e == b)
            v *= w[e] * co[e];
          else
            v *= s[e];
        }
        h(a, b) = v;
      }
    return h;
  };
  return f;
}

ClusterMatch match_cluster(const ExactSpectrum& exact, std::size_t index, const EigenResult& result,
                           const Discretization& disc, BoundaryCondition bc) {
  if (index >= exact.size()) throw Error(Errc::InvalidArgument, "target beyond the exact spectrum");
  const auto [first, last] = exact.cluster(index);
  if (static_cast<Index>(last) > result.size())
    throw Error(Errc::InvalidArgument, "not enough computed eigenpairs for the target cluster");
  const double lam = exact.values[index];

  const double spread = result.values[Index(last) - 1] - result.values[Index(first)];
  double gap = std::numeric_limits<double>::infinity();
  if (first > 0) gap = std::min(gap, lam - exact.values[first - 1]);
  if (last < exact.size()) gap = std::min(gap, exact.values[last] - lam);
  if (gap < 2.0 * spread) throw Error(Errc::ClusterAmbiguous, "discrete cluster overlaps a neighboring eigenvalue");

  const SmoothFunction u = exact.eigenfunction(index);
  const auto k = last - first;
  std::vector<Eigen::VectorXd> vecs;
  for (std::size_t i = first; i < last; ++i) vecs.emplace_back(result.vectors.col(Index(i)));

  ClusterMatch match;
  match.first = first;
  match.count = k;
  if (k == 1) {
    FieldTerm terms[2] = {{1.0, nullptr, 0.0}, {0.0, &vecs[0], 1.0}};
    const Eigen::MatrixXd g = field_gram(disc.mesh, disc.topology, disc.space, &u, terms, NormKind::L2, bc);
    const double sign = g(0, 1) < 0.0 ? -1.0 : 1.0;
    match.coefficients = Eigen::VectorXd::Constant(1, sign);
    match.combined = sign * vecs[0];
    return match;
  }

  std::vector<FieldTerm> terms;
  terms.push_back({1.0, nullptr, 0.0});
  for (const auto& v : vecs) terms.push_back({0.0, &v, 1.0});
  const Eigen::MatrixXd g =
      field_gram(disc.mesh, disc.topology, disc.space, &u, terms, energy_kind(exact.p), bc);
  const Eigen::MatrixXd gram = g.bottomRightCorner(Index(k), Index(k));
  const Eigen::VectorXd rhs = g.col(0).tail(Index(k));
  match.coefficients = gram.ldlt().solve(rhs);
  match.combined = Eigen::VectorXd::Zero(disc.num_dofs());
  for (std::size_t i = 0; i < k; ++i) match.combined += match.coefficients[Index(i)] * vecs[i];
  return match;
}

EigenErrors eigen_errors(const ExactSpectrum& exact, std::size_t index, const EigenResult& result,
                         const Discretization& disc, BoundaryCondition bc) {
  const ClusterMatch match = match_cluster(exact, index, result, disc, bc);
  const SmoothFunction u = exact.eigenfunction(index);
  EigenErrors e;
  const double lam = exact.values[index];
  e.eigenvalue = std::abs(lam - result.values[Index(index)]) / std::abs(lam);
  e.eigenfunction = energy_norm(disc.mesh, disc.topology, disc.space, &u, &match.combined, exact.p, bc);
  return e;
}

double observed_order(double error_coarse, double error_fine, double h_coarse, double h_fine) {
  return std::log(error_coarse / error_fine) / std::log(h_coarse / h_fine);
}

std::vector<ConvergenceRow> convergence_rows(std::span<const double> scales, std::span<const double> errors) {
  std::vector<ConvergenceRow> rows(scales.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].scale = scales[i];
    rows[i].error = errors[i];
    if (i > 0) rows[i].order = observed_order(errors[i - 1], errors[i], scales[i - 1], scales[i]);
  }
  return rows;
}

std::vector<ConvergenceRow> convergence_study(const StudyConfig& config, std::span<const Mesh> meshes) {
  config.form.validate();
  const int p = operator_order(config.form.problem);
  const int dim = meshes.empty() ? 2 : meshes.front().dim();
  if (dim != spectrum_dim(config.domain)) throw Error(Errc::InvalidArgument, "mesh dimension does not match the domain");
  const ExactSpectrum exact = exact_spectrum(config.domain, p, config.target + 16);
  const auto [first, last] = exact.cluster(config.target);
  (void)first;

  std::vector<ConvergenceRow> rows;
  for (const Mesh& mesh : meshes) {
    const Discretization disc = discretize(mesh, config.form.m, config.patch_size);
    const SystemMatrices sys = assemble_system(disc, config.form);
    // one extra pair so the cluster edge is resolved
    const Index k = std::min<Index>(Index(last) + 1, disc.num_dofs());
    const EigenResult res = solve_smallest(sys.stiffness, sys.mass, k, config.solver);
    const EigenErrors err = eigen_errors(exact, config.target, res, disc, config.form.bc);

    ConvergenceRow row;
    row.scale = disc.h;
    row.dofs = disc.num_dofs();
    row.value = res.values[Index(config.target)];
    row.error = err.eigenvalue;
    row.function_error = err.eigenfunction;
    if (!rows.empty()) {
      const auto& prev = rows.back();
      row.order = observed_order(prev.error, row.error, prev.scale, row.scale);
      row.function_order = observed_order(prev.function_error, row.function_error, prev.scale, row.scale);
    }
    rows.push_back(row);
  }
  return rows;
}

ReliableCount reliable_count(const ExactSpectrum& exact, const Eigen::VectorXd& values_h,
                             const Eigen::VectorXd& values_2h, double rate_threshold, std::size_t fine_dofs) {
  ReliableCount rc;
  const std::size_t n = std::min({exact.size(), std::size_t(values_h.size()), std::size_t(values_2h.size())});
  rc.compared = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double lam = exact.values[i];
    const double eh = std::abs(values_h[Index(i)] - lam) / lam;
    const double e2h = std::abs(values_2h[Index(i)] - lam) / lam;
    if (eh > e2h) continue;
    const double rate = eh == 0.0 ? std::numeric_limits<double>::infinity() : std::log2(e2h / eh);
    if (rate >= rate_threshold) ++rc.count;
  }
  const std::size_t denom = fine_dofs ? fine_dofs : std::size_t(values_h.size());
  rc.percentage = denom ? 100.0 * double(rc.count) / double(denom) : 0.0;
  return rc;
}

SourceResult solve_source(const FormConfig& config, const Discretization& disc,
                          const std::function<double(const Point&)>& f, const SmoothFunction* exact) {
  config.validate();
  const SymSparseMatrix a = assemble_stiffness(disc.mesh, disc.topology, disc.space, config);
  const Eigen::VectorXd b = assemble_load(disc.space, f);
  Eigen::SimplicialLLT<SymSparseMatrix::Storage, Eigen::Lower> llt(a.lower());
  if (llt.info() != Eigen::Success) throw Error(Errc::StiffnessNotSPD, "stiffness matrix is not positive definite");
  SourceResult r;
  r.solution = llt.solve(b);
  if (exact)
    r.energy_error = energy_norm(disc.mesh, disc.topology, disc.space, exact, &r.solution,
                                 operator_order(config.problem), config.bc);
  return r;
}

bool all_above_exact(const ExactSpectrum& exact, const Eigen::VectorXd& values, std::size_t count) {
  const std::size_t n = std::min({count, exact.size(), std::size_t(values.size())});
  for (std::size_t i = 0; i < n; ++i)
    if (!(values[Index(i)] > exact.values[i])) return false;
  return true;
}

}  // namespace patchdg
