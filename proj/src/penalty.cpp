#include "gsbps/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsbps/error.hpp"

namespace gsbps {

namespace {

void finish(PenaltyModel& pm) {
  const Eigen::Index K = pm.P.rows();
  pm.E.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) pm.E(k) = 1.0 / pm.P(k, k);
  // A = -(P - eps I) off the diagonal is simply -P, so C(j,k) = -P(j,k) / P(k,k) for j != k.
  pm.C = -pm.P;
  pm.C.diagonal().setZero();
  pm.C = pm.C * pm.E.asDiagonal();
}

void check_theta(std::span<const double> theta, const PenaltyModel& pm) {
  if (static_cast<int>(theta.size()) != pm.K) {
    fail(Errc::dimension_mismatch, "theta has length " + std::to_string(theta.size()) + ", expected " +
                                       std::to_string(pm.K));
  }
}

}  // namespace

Eigen::MatrixXd diff_matrix(int K, int r) {
  if (r != 2 && r != 3) fail(Errc::unsupported_order, "penalty order must be 2 or 3, got " + std::to_string(r));
  if (K <= r) {
    fail(Errc::invalid_dimension, "difference matrix needs K > r, got K=" + std::to_string(K));
  }
  // Stencil = r-th forward difference: binomial coefficients with alternating signs,
  // sign fixed so the last entry is +1.
  const Eigen::Vector4d stencil = r == 2 ? Eigen::Vector4d(1, -2, 1, 0) : Eigen::Vector4d(-1, 3, -3, 1);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(K - r, K);
  for (int i = 0; i < K - r; ++i) {
    for (int j = 0; j <= r; ++j) D(i, i + j) = stencil(j);
  }
  return D;
}

PenaltyModel penalty_matrix(int K, int r, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    fail(Errc::invalid_perturbation, "perturbation eps must be positive, got " + std::to_string(eps));
  }
  if (r != 2 && r != 3) fail(Errc::unsupported_order, "penalty order must be 2 or 3, got " + std::to_string(r));
  if (K < 2 * r + 1) {
    fail(Errc::invalid_dimension,
         "penalty of order " + std::to_string(r) + " needs K >= " + std::to_string(2 * r + 1) + ", got " +
             std::to_string(K));
  }
  PenaltyModel pm;
  pm.K = K;
  pm.r = r;
  pm.eps = eps;
  pm.D = diff_matrix(K, r);
  pm.P = pm.D.transpose() * pm.D;
  pm.P.diagonal().array() += eps;
  finish(pm);
  return pm;
}

PenaltyModel penalty_from_matrix(const Eigen::MatrixXd& P) {
  if (P.rows() != P.cols() || P.rows() < 1) fail(Errc::invalid_dimension, "penalty matrix must be square");
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, P.cwiseAbs().maxCoeff())) {
    fail(Errc::invalid_argument, "penalty matrix must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(P);
  if (llt.info() != Eigen::Success) fail(Errc::invalid_argument, "penalty matrix must be positive definite");
  PenaltyModel pm;
  pm.K = static_cast<int>(P.rows());
  pm.r = 0;
  pm.eps = 0.0;
  pm.P = P;
  finish(pm);
  return pm;
}

double PenaltyModel::psi(std::span<const double> theta, int k) const {
  check_theta(theta, *this);
  double s = 0.0;
  for (int j = 0; j < K; ++j) s += C(j, k) * theta[static_cast<std::size_t>(j)];
  return s * P(k, k);
}

double PenaltyModel::quad_form(std::span<const double> theta) const {
  check_theta(theta, *this);
  const Eigen::Map<const Eigen::VectorXd> t(theta.data(), static_cast<Eigen::Index>(theta.size()));
  return t.dot(P * t);
}

PriorMoments conditional_prior_moments(std::span<const double> theta, int k, double lambda,
                                       const PenaltyModel& pm) {
  if (!(lambda > 0.0)) fail(Errc::invalid_precision, "lambda must be positive, got " + std::to_string(lambda));
  if (k < 0 || k >= pm.K) fail(Errc::invalid_argument, "coefficient index out of range: " + std::to_string(k));
  check_theta(theta, pm);
  double mean = 0.0;
  for (int j = 0; j < pm.K; ++j) mean += pm.C(j, k) * theta[static_cast<std::size_t>(j)];
  return {mean, pm.E(k) / lambda};
}

}  // namespace gsbps
