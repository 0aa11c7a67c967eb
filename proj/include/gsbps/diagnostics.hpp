#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsbps/basis.hpp"
#include "gsbps/gibbs.hpp"

namespace gsbps {

struct ParameterSummary {
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
};

enum class Link { log, logit, identity };

struct FittedCurve {
  std::vector<double> grid;
  std::vector<double> estimate;
  std::vector<double> lo95;
  std::vector<double> hi95;
  Link link = Link::identity;
};

inline constexpr int kMinRetainedDraws = 100;
inline constexpr int kDefaultCurvePoints = 200;

/// Type-7 (linear interpolation) sample quantile of unsorted values.
double quantile(std::vector<double> values, double p);

/// Per-column summary of a draws matrix (all rows used).
std::vector<ParameterSummary> summarize_draws(const Eigen::MatrixXd& draws);

/// Per-column summary over the post-burn-in rows of the chain.
std::vector<ParameterSummary> posterior_summary(const Chain& chain);

/// Post-burn-in rows of a chain (all rows when burn-in is zero).
Eigen::MatrixXd retained_draws(const Chain& chain);

/// Linked curve from the posterior-mean coefficients on `grid_size` equally
/// spaced points over the knot range, with pointwise 95% bands from the
/// per-draw linked curves. `theta_draws` holds one coefficient vector per row.
FittedCurve fitted_curve(const Eigen::MatrixXd& theta_draws, const KnotVector& kv, Link link,
                         int grid_size = kDefaultCurvePoints);

/// fitted_curve over the retained theta columns of a chain.
FittedCurve fitted_curve(const Chain& chain, const KnotVector& kv, Link link, int grid_size = kDefaultCurvePoints);

/// Divides a log-link curve by the midpoint-rule integral of its estimate over
/// the support (2001 points, curve linearly interpolated).
FittedCurve density_estimate(const FittedCurve& curve, std::pair<double, double> support, int points = 2001);

/// Midpoint-rule integral of the piecewise-linear interpolant of a curve.
double integrate_curve(const std::vector<double>& grid, const std::vector<double>& values,
                       std::pair<double, double> support, int points = 2001);

/// Geweke z-score of one column: mean of the first frac_a against the last
/// frac_b, variances from nonoverlapping batch means (floor(sqrt(n)) batches).
double geweke_z(const std::vector<double>& column, double frac_a = 0.1, double frac_b = 0.5);

/// Geweke z for every column of the retained draws.
std::vector<double> geweke(const Chain& chain, double frac_a = 0.1, double frac_b = 0.5);

}  // namespace gsbps
