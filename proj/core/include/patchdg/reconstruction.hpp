// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "patchdg/mesh.hpp"
#include "patchdg/patch.hpp"

namespace patchdg {

/// Monomials of total degree <= m, graded lexicographic: degree ascending, then
/// the x exponent descending, then the y exponent descending. In 2D that is
/// 1, x, y, x^2, xy, y^2, x^3, ...
class MonomialBasis {
 public:
  MonomialBasis(int m, int dim);

  int degree() const noexcept { return m_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return exponents_.size(); }
  const std::vector<std::array<int, 3>>& exponents() const noexcept { return exponents_; }

  /// Partial derivative d^alpha of every monomial at y.
  Eigen::VectorXd derivative(const Point& y, const std::array<int, 3>& alpha) const;
  Eigen::VectorXd values(const Point& y) const { return derivative(y, {0, 0, 0}); }

 private:
  int m_;
  int dim_;
  std::vector<std::array<int, 3>> exponents_;
};

/// Shape functions of one element. Row j of `coeffs` holds the monomial
/// coefficients, in the frame y = (x - origin) / scale, of the function
/// attached to sampling node j of the patch.
struct LocalBasis {
  Index element = -1;
  Patch patch;
  int m = 1;
  int dim = 2;
  Eigen::MatrixXd coeffs;  // #nodes x dim P^m
  double scale = 1.0;
  Point origin = Point::Zero();
};

/// Per-node shape data at one point. Derivative blocks are filled up to the
/// requested level: 1 = gradient, 2 = Hessian and Laplacian, 3 = gradient of
/// the Laplacian as well.
struct ShapeEval {
  Eigen::VectorXd value;           // #nodes
  Eigen::MatrixXd gradient;        // #nodes x dim
  Eigen::MatrixXd hessian;         // #nodes x (dim*dim), row-major per node
  Eigen::VectorXd laplacian;       // #nodes
  Eigen::MatrixXd grad_laplacian;  // #nodes x dim
};

inline constexpr double kRankThreshold = 1e-10;

/// Least-squares reconstruction operator of one patch via column-pivoted QR.
/// Throws RankDeficient when the numerical rank of the node Vandermonde matrix
/// falls below dim P^m at relative threshold kRankThreshold.
LocalBasis fit_local(const Patch& patch, int m, int dim);

ShapeEval eval_shape(const LocalBasis& basis, const Point& x, int deriv);

/// The reconstructed space V_h = R(U_h): one local basis per element plus,
/// for every DOF j, the ascending list of elements K whose patch contains j.
struct Space {
  int m = 1;
  int dim = 2;
  std::vector<ElementGeometry> geometry;
  std::vector<LocalBasis> bases;
  std::vector<std::vector<Index>> support;

  Index num_dofs() const noexcept { return static_cast<Index>(bases.size()); }
  const LocalBasis& basis(Index k) const { return bases[static_cast<std::size_t>(k)]; }
};

/// Builds every patch with `patch_size` members (0 selects default_patch_size)
/// and fits it. A rank-deficient patch is grown by one ring of neighbors, up
/// to three times, before RankDeficient is reported with the element id.
Space build_space(const Mesh& mesh, const FaceTopology& topology, int m, std::size_t patch_size = 0);

using ScalarField = std::function<double(const Point&)>;

/// Samples g at every sampling node (barycenter): the U_h coefficients of R g.
Eigen::VectorXd interpolate(const Space& space, const ScalarField& g);

/// DOF values of the members of S(K), in patch order.
Eigen::VectorXd gather(const LocalBasis& basis, const Eigen::VectorXd& dofs);

/// (R u)|_K evaluated at x.
double evaluate(const Space& space, Index element, const Point& x, const Eigen::VectorXd& dofs);

/// CSV dump of every coefficient table: element,node,ex,ey,ez,coefficient.
/// Coefficients refer to the scaled frame of each element's LocalBasis.
void write_coefficients(std::ostream& os, const Space& space);

}  // namespace patchdg
