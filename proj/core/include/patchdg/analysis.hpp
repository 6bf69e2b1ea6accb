// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "patchdg/discretization.hpp"
#include "patchdg/eigensolve.hpp"
#include "patchdg/norms.hpp"

namespace patchdg {

/// Model domains with closed-form spectra: [0, pi]^2 and [0, 1]^3.
enum class Domain { SquarePi, CubeUnit };

/// Dirichlet Laplace (p = 1) or simply supported biharmonic (p = 2) spectrum,
/// ascending, multiplicities expanded. Equal values are ordered by label.
struct ExactSpectrum {
  Domain domain = Domain::SquarePi;
  int p = 1;
  std::vector<double> values;
  std::vector<std::array<int, 3>> labels;  // (i, j) or (i, j, k); unused entries are 0

  std::size_t size() const noexcept { return values.size(); }
  /// L2-normalized eigenfunction prod_d sin(a_d k_d x_d).
  SmoothFunction eigenfunction(std::size_t index) const;
  /// Half-open range [first, last) of indices sharing values[index].
  std::pair<std::size_t, std::size_t> cluster(std::size_t index) const;
};

ExactSpectrum exact_spectrum(Domain domain, int p, std::size_t count);

/// The discrete pairs converging to exact eigenvalue `index` (0-based) and the
/// member of their span used as the discrete eigenfunction: for a simple
/// eigenvalue the M-normalized vector with positive L2 product against the
/// exact function, otherwise the energy-norm best approximation.
struct ClusterMatch {
  std::size_t first = 0;
  std::size_t count = 1;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd combined;
};

ClusterMatch match_cluster(const ExactSpectrum& exact, std::size_t index, const EigenResult& result,
                           const Discretization& disc, BoundaryCondition bc);

struct EigenErrors {
  double eigenvalue = 0.0;     // |lambda - lambda_h| / |lambda|
  double eigenfunction = 0.0;  // energy norm of u - R w_h
};

EigenErrors eigen_errors(const ExactSpectrum& exact, std::size_t index, const EigenResult& result,
                         const Discretization& disc, BoundaryCondition bc);

/// log(e_coarse / e_fine) / log(h_coarse / h_fine); log2 of the error ratio
/// for a halved mesh size.
double observed_order(double error_coarse, double error_fine, double h_coarse, double h_fine);

struct ConvergenceRow {
  double scale = 0.0;  // h
  Index dofs = 0;
  double value = 0.0;
  double error = 0.0;  // relative eigenvalue error
  std::optional<double> order;
  double function_error = 0.0;
  std::optional<double> function_order;
};

struct StudyConfig {
  FormConfig form;
  Domain domain = Domain::SquarePi;
  std::size_t target = 0;  // 0-based index into the exact spectrum
  std::size_t patch_size = 0;
  LanczosOptions solver;
};

std::vector<ConvergenceRow> convergence_study(const StudyConfig& config, std::span<const Mesh> meshes);

/// Rows from (scale, error) pairs; order from the second row onward.
std::vector<ConvergenceRow> convergence_rows(std::span<const double> scales, std::span<const double> errors);

struct ReliableCount {
  std::size_t count = 0;
  double percentage = 0.0;  // 100 * count / fine DOFs
  std::size_t compared = 0;
};

/// Counts indices whose rate log2(e_2h / e_h) is >= threshold and whose error
/// did not grow. Zero fine-mesh error counts as rate +inf. `fine_dofs` defaults
/// to values_h.size().
ReliableCount reliable_count(const ExactSpectrum& exact, const Eigen::VectorXd& values_h,
                             const Eigen::VectorXd& values_2h, double rate_threshold = 1.0,
                             std::size_t fine_dofs = 0);

struct SourceResult {
  Eigen::VectorXd solution;
  double energy_error = 0.0;
};

/// Solves a_h(R u_h, R v) = (f, R v) and measures |u_s - R u_h| in the energy norm.
SourceResult solve_source(const FormConfig& config, const Discretization& disc,
                          const std::function<double(const Point&)>& f, const SmoothFunction* exact);

/// True when each of the first `count` computed eigenvalues exceeds its exact one.
bool all_above_exact(const ExactSpectrum& exact, const Eigen::VectorXd& values, std::size_t count);

}  // namespace patchdg
