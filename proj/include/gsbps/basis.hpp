#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gsbps {

/// Open-uniform cubic knot sequence on [lower, upper].
///
/// The boundary knots are repeated degree+1 times and the interior knots are
/// equidistant, so the basis dimension is K = interior_count + degree + 1 and
/// `knots.size() == K + degree + 1`.
struct KnotVector {
  double lower = 0.0;
  double upper = 1.0;
  int degree = 3;
  int interior_count = 0;
  std::vector<double> knots;

  [[nodiscard]] int dim() const noexcept { return interior_count + degree + 1; }
};

/// Dense n x K matrix whose row i holds b(x_i).
using BasisMatrix = Eigen::MatrixXd;

KnotVector make_knots(double lower, double upper, int K);

/// All K cubic B-spline values at x (at most four are nonzero).
std::vector<double> eval_basis(double x, const KnotVector& kv);

BasisMatrix design_matrix(std::span<const double> xs, const KnotVector& kv);

}  // namespace gsbps
