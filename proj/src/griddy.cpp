#include "gsbps/griddy.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "gsbps/error.hpp"

namespace gsbps {

namespace {

constexpr int kMaxDoublings = 60;

double march(const ConditionalTarget& target, double mode, double sigma, double c_f, double phi_mode, double dir) {
  double offset = 0.0;
  double step = sigma;
  for (int k = 0; k < kMaxDoublings; ++k, step *= 2.0) {
    offset += step;
    const double t = mode + dir * offset;
    if (t <= target.lower || t >= target.upper) return dir < 0 ? target.lower : target.upper;
    if (target.logpdf(t) - phi_mode < c_f) return t;
  }
  std::ostringstream os;
  os << "log-density did not drop " << -c_f << " below its mode value within " << kMaxDoublings
     << " doublings on the " << (dir < 0 ? "left" : "right");
  fail(Errc::unbounded_target, os.str());
}

}  // namespace

std::pair<double, double> grow_grid(const ConditionalTarget& target, double mode, double sigma, double c_f) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(Errc::invalid_argument, "grid step sigma must be positive");
  if (!(c_f < 0.0)) fail(Errc::invalid_argument, "grid threshold c_f must be negative");
  const double phi_mode = target.logpdf(mode);
  if (!std::isfinite(phi_mode)) fail(Errc::numeric_failure, "log-density is not finite at the mode");
  return {march(target, mode, sigma, c_f, phi_mode, -1.0), march(target, mode, sigma, c_f, phi_mode, 1.0)};
}

Grid build_grid(const ConditionalTarget& target, double lo, double hi, int L) {
  if (!(lo < hi)) fail(Errc::invalid_argument, "grid needs lo < hi");
  if (L < 2) fail(Errc::invalid_argument, "grid needs at least 2 points");
  Grid g;
  const auto n = static_cast<std::size_t>(L);
  g.points.resize(n);
  g.log_weights.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    g.points[l] = l + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(l) / (L - 1);
    g.log_weights[l] = target.logpdf(g.points[l]);
    if (std::isnan(g.log_weights[l])) {
      std::ostringstream os;
      os << "log-density is NaN at grid point " << g.points[l];
      fail(Errc::numeric_failure, os.str());
    }
  }
  const double top = *std::max_element(g.log_weights.begin(), g.log_weights.end());
  if (!std::isfinite(top)) fail(Errc::numeric_failure, "log-density has no finite maximum on the grid");
  double total = 0.0;
  g.probs.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    g.log_weights[l] -= top;
    g.probs[l] = std::exp(g.log_weights[l]);
    total += g.probs[l];
  }
  for (auto& p : g.probs) p /= total;
  return g;
}

double griddy_sample(const Grid& grid, RandomSource& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t l = 0; l + 1 < grid.points.size(); ++l) {
    acc += grid.probs[l];
    if (u < acc) return grid.points[l];
  }
  return grid.points.back();
}

}  // namespace gsbps
