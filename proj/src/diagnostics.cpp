#include "gsbps/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>

#include "gsbps/error.hpp"

namespace gsbps {

namespace {

double apply_link(Link link, double eta) {
  switch (link) {
    case Link::log:
      return std::exp(eta);
    case Link::logit:
      return eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
    case Link::identity:
      return eta;
  }
  return eta;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto j = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return (1.0 - w) * ys[j - 1] + w * ys[j];
}

struct BatchStats {
  double mean = 0.0;
  double var_of_mean = 0.0;
};

BatchStats batch_means(std::span<const double> x) {
  const auto n = x.size();
  const auto nb = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
  if (nb < 10) {
    std::ostringstream os;
    os << "window of " << n << " draws gives fewer than 10 batches";
    fail(Errc::insufficient_draws, os.str());
  }
  const std::size_t size = n / nb;
  std::vector<double> means(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    means[b] = std::accumulate(x.begin() + static_cast<std::ptrdiff_t>(b * size),
                               x.begin() + static_cast<std::ptrdiff_t>((b + 1) * size), 0.0) /
               static_cast<double>(size);
  }
  BatchStats st;
  st.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(nb);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  // Long-run variance of one draw is size * Var(batch mean); divide by n for the mean.
  const double lrv = static_cast<double>(size) * ss / static_cast<double>(nb - 1);
  st.var_of_mean = lrv / static_cast<double>(n);
  return st;
}

}  // namespace

double quantile(std::vector<double> values, double p) {
  if (values.empty()) fail(Errc::insufficient_draws, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<ParameterSummary> summarize_draws(const Eigen::MatrixXd& draws) {
  std::vector<ParameterSummary> out(static_cast<std::size_t>(draws.cols()));
  const auto n = static_cast<double>(draws.rows());
  for (Eigen::Index j = 0; j < draws.cols(); ++j) {
    std::vector<double> col(draws.col(j).data(), draws.col(j).data() + draws.rows());
    auto& s = out[static_cast<std::size_t>(j)];
    s.mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : col) ss += (v - s.mean) * (v - s.mean);
    s.sd = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::sort(col.begin(), col.end());
    s.q025 = quantile(col, 0.025);
    s.q50 = quantile(col, 0.5);
    s.q975 = quantile(col, 0.975);
    // A constant column should report its value exactly, not a rounded mean.
    if (col.front() == col.back()) {
      s.mean = col.front();
      s.sd = 0.0;
    }
  }
  return out;
}

Eigen::MatrixXd retained_draws(const Chain& chain) {
  const Eigen::Index burn = chain.config.burnin;
  return chain.draws.bottomRows(chain.draws.rows() - burn);
}

std::vector<ParameterSummary> posterior_summary(const Chain& chain) {
  const Eigen::MatrixXd kept = retained_draws(chain);
  if (kept.rows() < kMinRetainedDraws) {
    std::ostringstream os;
    os << "posterior summary needs at least " << kMinRetainedDraws << " retained draws, chain has " << kept.rows();
    fail(Errc::insufficient_draws, os.str());
  }
  return summarize_draws(kept);
}

FittedCurve fitted_curve(const Eigen::MatrixXd& theta_draws, const KnotVector& kv, Link link, int grid_size) {
  if (grid_size < 2) fail(Errc::invalid_argument, "curve grid needs at least 2 points");
  if (theta_draws.rows() < 1) fail(Errc::insufficient_draws, "curve needs at least one draw");
  if (theta_draws.cols() != kv.dim()) fail(Errc::dimension_mismatch, "theta draws do not match the basis dimension");

  FittedCurve c;
  c.link = link;
  c.grid.resize(static_cast<std::size_t>(grid_size));
  for (int g = 0; g < grid_size; ++g) {
    c.grid[static_cast<std::size_t>(g)] =
        g + 1 == grid_size ? kv.upper : kv.lower + (kv.upper - kv.lower) * g / (grid_size - 1);
  }
  const BasisMatrix Bg = design_matrix(c.grid, kv);
  const Eigen::VectorXd theta_hat = theta_draws.colwise().mean().transpose();
  const Eigen::VectorXd eta_hat = Bg * theta_hat;
  const Eigen::MatrixXd eta_draws = Bg * theta_draws.transpose();  // grid x draws

  const auto G = static_cast<std::size_t>(grid_size);
  c.estimate.resize(G);
  c.lo95.resize(G);
  c.hi95.resize(G);
  std::vector<double> vals(static_cast<std::size_t>(theta_draws.rows()));
  for (std::size_t g = 0; g < G; ++g) {
    const auto gi = static_cast<Eigen::Index>(g);
    for (std::size_t d = 0; d < vals.size(); ++d) vals[d] = apply_link(link, eta_draws(gi, static_cast<Eigen::Index>(d)));
    c.estimate[g] = apply_link(link, eta_hat(gi));
    c.lo95[g] = quantile(vals, 0.025);
    c.hi95[g] = quantile(vals, 0.975);
  }
  return c;
}

FittedCurve fitted_curve(const Chain& chain, const KnotVector& kv, Link link, int grid_size) {
  const Eigen::MatrixXd kept = retained_draws(chain);
  return fitted_curve(Eigen::MatrixXd(kept.leftCols(chain.K)), kv, link, grid_size);
}

double integrate_curve(const std::vector<double>& grid, const std::vector<double>& values,
                       std::pair<double, double> support, int points) {
  if (points < 1 || !(support.first < support.second)) fail(Errc::invalid_argument, "bad quadrature set-up");
  const double w = (support.second - support.first) / points;
  double sum = 0.0;
  for (int i = 0; i < points; ++i) sum += interpolate(grid, values, support.first + (i + 0.5) * w);
  return sum * w;
}

FittedCurve density_estimate(const FittedCurve& curve, std::pair<double, double> support, int points) {
  if (curve.link != Link::log) fail(Errc::invalid_argument, "density normalization needs a log-link curve");
  const double mass = integrate_curve(curve.grid, curve.estimate, support, points);
  if (!(mass > 0.0) || !std::isfinite(mass)) fail(Errc::numeric_failure, "curve integral is not positive");
  FittedCurve out = curve;
  for (std::size_t g = 0; g < out.grid.size(); ++g) {
    out.estimate[g] /= mass;
    out.lo95[g] /= mass;
    out.hi95[g] /= mass;
  }
  return out;
}

double geweke_z(const std::vector<double>& column, double frac_a, double frac_b) {
  if (!(frac_a > 0.0 && frac_b > 0.0 && frac_a + frac_b <= 1.0)) {
    fail(Errc::invalid_argument, "window fractions must be positive and sum to at most 1");
  }
  const auto n = column.size();
  const auto [mn, mx] = std::minmax_element(column.begin(), column.end());
  if (n > 0 && *mn == *mx) return 0.0;
  const auto na = static_cast<std::size_t>(std::floor(frac_a * static_cast<double>(n)));
  const auto nb = static_cast<std::size_t>(std::floor(frac_b * static_cast<double>(n)));
  const std::span<const double> all(column);
  const BatchStats a = batch_means(all.first(na));
  const BatchStats b = batch_means(all.last(nb));
  const double var = a.var_of_mean + b.var_of_mean;
  if (var == 0.0) return a.mean == b.mean ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), a.mean - b.mean);
  return (a.mean - b.mean) / std::sqrt(var);
}

std::vector<double> geweke(const Chain& chain, double frac_a, double frac_b) {
  const Eigen::MatrixXd kept = retained_draws(chain);
  std::vector<double> z(static_cast<std::size_t>(kept.cols()));
  for (Eigen::Index j = 0; j < kept.cols(); ++j) {
    const std::vector<double> col(kept.col(j).data(), kept.col(j).data() + kept.rows());
    z[static_cast<std::size_t>(j)] = geweke_z(col, frac_a, frac_b);
  }
  return z;
}

}  // namespace gsbps
