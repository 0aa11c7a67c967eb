#pragma once

#include <span>

#include <Eigen/Dense>

namespace gsbps {

inline constexpr double kDefaultEps = 1e-6;

/// Difference penalty P = D'D + eps*I together with the matrices used for
/// the closed-form conditional prior of each coefficient:
///   E = diag(1 / P_kk),  C = (A - A o I) E  with  A = -D'D.
/// Row k of C' applied to theta gives the conditional prior mean of theta_k.
struct PenaltyModel {
  int K = 0;
  int r = 0;  ///< 0 when built from an explicit matrix
  double eps = kDefaultEps;
  Eigen::MatrixXd D;
  Eigen::MatrixXd P;
  Eigen::VectorXd E;  ///< diagonal of E
  Eigen::MatrixXd C;

  /// Diagonal entry P_kk, i.e. z_r(k, eps). Zero-based k.
  [[nodiscard]] double z(int k) const { return P(k, k); }

  /// psi_r(theta_{-k}) = -sum_{j != k} P_kj theta_j.
  [[nodiscard]] double psi(std::span<const double> theta, int k) const;

  /// theta' P theta.
  [[nodiscard]] double quad_form(std::span<const double> theta) const;
};

/// (K - r) x K difference matrix of order r in {2, 3}.
Eigen::MatrixXd diff_matrix(int K, int r);

/// Requires r in {2, 3}, K >= 2r + 1 and eps > 0.
PenaltyModel penalty_matrix(int K, int r, double eps = kDefaultEps);

/// Penalty model around an arbitrary symmetric positive-definite matrix.
/// Used for toy problems below the P-spline minimum dimension.
PenaltyModel penalty_from_matrix(const Eigen::MatrixXd& P);

struct PriorMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Gaussian conditional prior of theta_k given theta_{-k} and lambda.
/// Zero-based k.
PriorMoments conditional_prior_moments(std::span<const double> theta, int k, double lambda,
                                       const PenaltyModel& pm);

}  // namespace gsbps
