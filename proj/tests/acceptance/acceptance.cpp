// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "patchdg/analysis.hpp"
#include "patchdg/quadrature.hpp"

using namespace patchdg;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

Mesh square(int n) { return generate_square_tri(n, kPi); }

std::vector<Mesh> squares(std::initializer_list<int> ns) {
  std::vector<Mesh> out;
  for (int n : ns) out.push_back(square(n));
  return out;
}

// Random polynomial of total degree <= m with coefficients in [-1, 1].
struct Poly {
  std::vector<std::array<int, 3>> exps;
  std::vector<double> coef;
  double operator()(const Point& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < exps.size(); ++i)
      s += coef[i] * std::pow(x[0], exps[i][0]) * std::pow(x[1], exps[i][1]) * std::pow(x[2], exps[i][2]);
    return s;
  }
};

Poly random_poly(int m, int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly p;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; a + b <= m; ++b)
      for (int c = 0; a + b + c <= m; ++c) {
        if (dim == 2 && c > 0) continue;
        p.exps.push_back({a, b, c});
        p.coef.push_back(u(rng));
      }
  return p;
}

Outcome criterion1() {
  Outcome o;
  std::mt19937_64 rng(7);
  auto run = [&](const Mesh& mesh, int m) {
    const FaceTopology topo = build_topology(mesh);
    const Space space = build_space(mesh, topo, m);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const Poly g = random_poly(m, mesh.dim(), rng);
      const Eigen::VectorXd dofs = interpolate(space, g);
      double err = 0.0, scale = 0.0;
      for (Index k = 0; k < mesh.num_elements(); ++k) {
        std::vector<Point> pts;
        for (Index v : mesh.element(k)) pts.push_back(mesh.vertex(v));
        pts.push_back(space.geometry[std::size_t(k)].barycenter);
        for (const Point& x : pts) {
          err = std::max(err, std::abs(evaluate(space, k, x, dofs) - g(x)));
          scale = std::max(scale, std::abs(g(x)));
        }
      }
      worst = std::max(worst, err / scale);
    }
    return worst;
  };
  for (int m = 1; m <= 5; ++m) {
    const double e = run(square(8), m);
    o.check(e <= 1e-9, "square:8 m=" + std::to_string(m) + " " + fmt(e, 2));
  }
  for (int m = 1; m <= 3; ++m) {
    const double e = run(generate_cube_tet(4), m);
    o.check(e <= 1e-9, "cube:4 m=" + std::to_string(m) + " " + fmt(e, 2));
  }
  return o;
}

SmoothFunction sin_sin() {
  SmoothFunction f;
  f.value = [](const Point& x) { return std::sin(x[0]) * std::sin(x[1]); };
  f.gradient = [](const Point& x) {
    return Point(std::cos(x[0]) * std::sin(x[1]), std::sin(x[0]) * std::cos(x[1]), 0.0);
  };
  f.hessian = [](const Point& x) {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    h(0, 0) = h(1, 1) = -std::sin(x[0]) * std::sin(x[1]);
    h(0, 1) = h(1, 0) = std::cos(x[0]) * std::cos(x[1]);
    return h;
  };
  return f;
}

Outcome criterion2() {
  Outcome o;
  const SmoothFunction u = sin_sin();
  for (int m = 1; m <= 4; ++m) {
    std::vector<double> h, l2, h1;
    for (int n : {8, 16, 32}) {
      const Discretization d = discretize(square(n), m);
      const InterpolationErrors e = interpolation_errors(d.space, u, interpolate(d.space, u.value));
      h.push_back(d.h);
      l2.push_back(e.l2);
      h1.push_back(e.broken_h1);
    }
    const double ol2 = observed_order(l2[1], l2[2], h[1], h[2]);
    const double oh1 = observed_order(h1[1], h1[2], h[1], h[2]);
    o.check(std::abs(ol2 - (m + 1)) <= 0.25, "m=" + std::to_string(m) + " L2 " + fmt(ol2));
    o.check(std::abs(oh1 - m) <= 0.25, "m=" + std::to_string(m) + " H1 " + fmt(oh1));
  }
  return o;
}

Outcome eigen_orders(Problem problem, std::initializer_list<int> degrees, int shift, std::size_t target) {
  Outcome o;
  for (int m : degrees) {
    StudyConfig s;
    s.form.problem = problem;
    s.form.bc = problem == Problem::Laplace ? BoundaryCondition::Dirichlet : BoundaryCondition::SimplySupported;
    s.form.m = m;
    s.target = target;
    const auto meshes = squares({8, 16, 32});
    const auto rows = convergence_study(s, meshes);
    const double ov = *rows.back().order, of = *rows.back().function_order;
    const int p = m - shift;
    o.check(std::abs(ov - 2 * p) <= 0.3, "m=" + std::to_string(m) + " value " + fmt(ov));
    o.check(std::abs(of - p) <= 0.3, "m=" + std::to_string(m) + " function " + fmt(of));
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  // first-eigenvalue relative errors at h = 1/4 and 1/8 for m = 1, 2
  const double reference[2][2] = {{5.33e-1, 1.81e-1}, {2.01e-1, 1.21e-2}};
  for (int m = 1; m <= 2; ++m) {
    StudyConfig s;
    s.form.m = m;
    s.domain = Domain::CubeUnit;
    const std::vector<Mesh> meshes{generate_cube_tet(4), generate_cube_tet(8)};
    const auto rows = convergence_study(s, meshes);
    const double ov = observed_order(rows[0].error, rows[1].error, 0.25, 0.125);
    o.check(std::abs(ov - 2 * m) <= 0.4, "m=" + std::to_string(m) + " order " + fmt(ov));
    for (int i = 0; i < 2; ++i) {
      const double ratio = rows[std::size_t(i)].error / reference[m - 1][i];
      o.check(ratio <= 3.0 && ratio >= 1.0 / 3.0,
              "m=" + std::to_string(m) + " n=" + std::to_string(4 << i) + " err " + fmt(rows[std::size_t(i)].error));
    }
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  StudyConfig s;
  s.form.problem = Problem::Biharmonic;
  s.form.bc = BoundaryCondition::SimplySupported;
  s.form.m = 2;
  s.domain = Domain::CubeUnit;
  const std::vector<Mesh> meshes{generate_cube_tet(4), generate_cube_tet(8)};
  const auto rows = convergence_study(s, meshes);
  const double ov = observed_order(rows[0].error, rows[1].error, 0.25, 0.125);
  o.check(rows[0].error <= 0.5, "cube:4 err " + fmt(rows[0].error, 4));
  o.check(rows[1].error < rows[0].error && ov >= 1.5, "cube:8 err " + fmt(rows[1].error) + " order " + fmt(ov));
  return o;
}

Eigen::VectorXd full_spectrum(int n, int m) {
  FormConfig f;
  f.m = m;
  const Discretization d = discretize(square(n), m);
  const SystemMatrices sys = assemble_system(d, f);
  return solve_dense(sys.stiffness, sys.mass).values;
}

Outcome criterion7() {
  Outcome o;
  auto count = [](int coarse, int m) {
    const Eigen::VectorXd v2h = full_spectrum(coarse, m), vh = full_spectrum(2 * coarse, m);
    const ExactSpectrum ex = exact_spectrum(Domain::SquarePi, 1, std::size_t(v2h.size()));
    return reliable_count(ex, vh, v2h, 1.0, std::size_t(vh.size()));
  };
  const ReliableCount small1 = count(6, 1), large1 = count(11, 1), large4 = count(11, 4);
  const double ratio = double(large4.count) / double(std::max<std::size_t>(1, large1.count));
  o.check(ratio >= 5.0, "N=968 m=4/m=1 " + std::to_string(large4.count) + "/" + std::to_string(large1.count));
  o.check(large1.percentage < small1.percentage,
          "m=1 " + fmt(small1.percentage) + "% (N=288) -> " + fmt(large1.percentage) + "% (N=968)");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Eigen::VectorXd v = full_spectrum(16, 2);
  const ExactSpectrum ex = exact_spectrum(Domain::SquarePi, 1, 10);
  double margin = INFINITY;
  for (int i = 0; i < 10; ++i) margin = std::min(margin, (v[i] - ex.values[std::size_t(i)]) / ex.values[std::size_t(i)]);
  o.check(all_above_exact(ex, v, 10), "min relative excess " + fmt(margin));
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (int m = 1; m <= 2; ++m) {
    FormConfig f;
    f.m = m;
    const Discretization d = discretize(square(8), m);
    const SystemMatrices sys = assemble_system(d, f);
    const EigenResult dense = solve_dense(sys.stiffness, sys.mass);
    const EigenResult lanczos = solve_smallest(sys.stiffness, sys.mass, 10);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) worst = std::max(worst, std::abs(dense.values[i] - lanczos.values[i]) / dense.values[i]);
    o.check(worst <= 1e-8, "m=" + std::to_string(m) + " " + fmt(worst, 2));
  }
  return o;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

Outcome criterion10() {
  Outcome o;

  // partition of unity: shape values sum to 1, gradients to 0
  {
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m) {
      const Discretization d = discretize(square(4), m);
      for (Index k = 0; k < d.num_dofs(); ++k) {
        const ShapeEval s = eval_shape(d.space.basis(k), d.space.geometry[std::size_t(k)].barycenter, 1);
        worst = std::max({worst, std::abs(s.value.sum() - 1.0), s.gradient.colwise().sum().cwiseAbs().maxCoeff()});
      }
    }
    o.check(worst <= 1e-10, "partition of unity " + fmt(worst, 2));
  }

  // symmetry and positive definiteness
  {
    bool ok = true;
    struct Case {
      Problem p;
      BoundaryCondition bc;
      int m;
    };
    for (const Case c : {Case{Problem::Laplace, BoundaryCondition::Dirichlet, 1},
                         Case{Problem::Laplace, BoundaryCondition::Dirichlet, 3},
                         Case{Problem::Biharmonic, BoundaryCondition::SimplySupported, 2},
                         Case{Problem::Biharmonic, BoundaryCondition::Clamped, 3}}) {
      FormConfig f;
      f.problem = c.p;
      f.bc = c.bc;
      f.m = c.m;
      const Discretization d = discretize(square(4), c.m);
      const SystemMatrices sys = assemble_system(d, f);
      const Eigen::MatrixXd a = sys.stiffness.dense(), mm = sys.mass.dense();
      ok = ok && (a - a.transpose()).norm() == 0.0 && (mm - mm.transpose()).norm() == 0.0;
      ok = ok && is_positive_definite(sys.stiffness) && is_positive_definite(sys.mass);
    }
    o.check(ok, "symmetric positive definite");
  }

  // quadrature exactness on monomials
  {
    double worst = 0.0;
    for (int dim = 2; dim <= 3; ++dim)
      for (int q = 1; q <= max_order(dim); ++q) {
        const QuadRule& r = simplex_rule(dim, q);
        for (int a = 0; a <= q; ++a)
          for (int b = 0; a + b <= q; ++b)
            for (int c = 0; a + b + c <= q; ++c) {
              if (dim == 2 && c > 0) continue;
              double s = 0.0;
              for (std::size_t i = 0; i < r.weights.size(); ++i)
                s += r.weights[i] * std::pow(r.points[i][0], a) * std::pow(r.points[i][1], b) *
                     (dim == 3 ? std::pow(r.points[i][2], c) : 1.0);
              const double exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + dim);
              worst = std::max(worst, std::abs(s - exact) / exact);
            }
      }
    o.check(worst <= 1e-12, "quadrature " + fmt(worst, 2));
  }

  // Rayleigh quotient identity
  {
    FormConfig f;
    f.m = 2;
    const Discretization d = discretize(square(8), 2);
    const SystemMatrices sys = assemble_system(d, f);
    const EigenResult r = solve_smallest(sys.stiffness, sys.mass, 10);
    double worst = 0.0;
    for (Index i = 0; i < r.size(); ++i) {
      const Eigen::VectorXd x = r.vectors.col(i);
      const double rq = sys.stiffness.quadratic_form(x) / sys.mass.quadratic_form(x);
      worst = std::max(worst, std::abs(rq - r.values[i]) / r.values[i]);
    }
    o.check(worst <= 1e-10, "Rayleigh quotient " + fmt(worst, 2));
  }

  // MSH round trip
  {
    bool ok = true;
    for (const Mesh& m : {square(3), generate_cube_tet(2)}) {
      const Mesh back = parse_msh(write_msh(m));
      ok = ok && back.elements() == m.elements() && back.num_vertices() == m.num_vertices();
      for (Index v = 0; ok && v < m.num_vertices(); ++v) ok = (back.vertex(v) - m.vertex(v)).norm() <= 1e-12;
    }
    o.check(ok, "MSH round trip");
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"reconstruction exactness", criterion1},
      {"interpolation rates", criterion2},
      {"2D Laplace eigenvalue convergence", [] { return eigen_orders(Problem::Laplace, {1, 2, 3}, 0, 19); }},
      {"2D biharmonic eigenvalue convergence", [] { return eigen_orders(Problem::Biharmonic, {2, 3}, 1, 19); }},
      {"3D Laplace first eigenvalue", criterion5},
      {"3D biharmonic first eigenvalue", criterion6},
      {"reliable eigenvalue trend", criterion7},
      {"eigenvalues above exact", criterion8},
      {"dense vs shift-invert", criterion9},
      {"property suites", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s (%s) [%.1fs]\n", i + 1, criteria[i].name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
