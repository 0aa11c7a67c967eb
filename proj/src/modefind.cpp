#include "gsbps/modefind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gsbps/error.hpp"

namespace gsbps {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kGradTol = 1e-8;

// Gradient at t. An overflow in the likelihood can only happen as t -> +inf
// (basis values are nonnegative), where phi' -> -inf; report it as such so
// the bracket shrinks from the right.
double gradient(const ConditionalTarget& target, double t) {
  try {
    const double g = target.dlogpdf(t);
    if (std::isnan(g)) {
      std::ostringstream os;
      os << "non-finite derivative at t = " << t;
      fail(Errc::numeric_failure, os.str());
    }
    return g;
  } catch (const Error& e) {
    if (e.code() == Errc::overflow) return -std::numeric_limits<double>::infinity();
    throw;
  }
}

double sigma_at(const ConditionalTarget& target, double mode) {
  const double h = target.d2logpdf(mode);
  if (!(h < 0.0) || !std::isfinite(h)) {
    std::ostringstream os;
    os << "second derivative " << h << " at the mode t = " << mode << " is not negative";
    fail(Errc::numeric_failure, os.str());
  }
  return 1.0 / std::sqrt(-h);
}

double gradient_scale(const ConditionalTarget& target, double fallback) {
  double g0 = std::numeric_limits<double>::quiet_NaN();
  if (0.0 > target.lower && 0.0 < target.upper) g0 = gradient(target, 0.0);
  if (!std::isfinite(g0)) g0 = gradient(target, fallback);
  return 1.0 + (std::isfinite(g0) ? std::abs(g0) : 0.0);
}

}  // namespace

double default_kappa(double lambda_z) {
  if (!(lambda_z > 0.0)) fail(Errc::invalid_argument, "lambda_z must be positive");
  return 10.0 / std::sqrt(lambda_z);
}

std::pair<double, double> bracket_mode(const ConditionalTarget& target, double lambda_z, double kappa) {
  if (!target.declared_logconcave) {
    fail(Errc::invalid_argument, "the mode bracket requires a log-concave target");
  }
  if (!(lambda_z > 0.0) || !std::isfinite(lambda_z)) fail(Errc::invalid_argument, "lambda_z must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) fail(Errc::invalid_argument, "kappa must be positive");
  const double g0 = gradient(target, 0.0);
  if (!std::isfinite(g0)) fail(Errc::numeric_failure, "non-finite derivative at t = 0");
  if (g0 < 0.0) return {g0 / lambda_z - kappa, 0.0};
  if (g0 > 0.0) return {0.0, g0 / lambda_z + kappa};
  return {0.0, 0.0};
}

ModeResult find_mode(const ConditionalTarget& target, std::pair<double, double> bracket,
                     std::optional<double> start, std::vector<double>* accepted_gradients) {
  double lo = bracket.first;
  double hi = bracket.second;
  if (!(lo <= hi)) fail(Errc::invalid_argument, "bracket must satisfy lo <= hi");

  ModeResult res;
  res.bracket = bracket;
  if (lo == hi) {
    res.mode = lo;
    res.sigma = sigma_at(target, lo);
    return res;
  }

  double x = std::clamp(start.value_or(0.0), lo, hi);
  const double tol = kGradTol * gradient_scale(target, x);
  double g = gradient(target, x);
  if (accepted_gradients) accepted_gradients->push_back(g);

  for (int it = 0; it < kMaxIterations; ++it) {
    if (std::abs(g) < tol) {
      res.mode = x;
      res.iterations = it;
      res.sigma = sigma_at(target, x);
      return res;
    }
    if (g > 0.0) lo = std::max(lo, x);
    if (g < 0.0) hi = std::min(hi, x);
    if (!(hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)))) {
      // Bracket exhausted at machine precision.
      res.mode = x;
      res.iterations = it;
      res.sigma = sigma_at(target, x);
      return res;
    }

    bool moved = false;
    if (std::isfinite(g)) {
      const double h = target.d2logpdf(x);
      if (h < 0.0 && std::isfinite(h)) {
        const double xn = x - g / h;
        if (xn > lo && xn < hi) {
          const double gn = gradient(target, xn);
          if (std::abs(gn) < std::abs(g)) {
            x = xn;
            g = gn;
            moved = true;
            if (accepted_gradients) accepted_gradients->push_back(g);
          } else {
            if (gn > 0.0) lo = std::max(lo, xn);
            if (gn < 0.0) hi = std::min(hi, xn);
          }
        }
      }
    }
    if (!moved) {
      const double xm = 0.5 * (lo + hi);
      const double gm = gradient(target, xm);
      if (std::abs(gm) < std::abs(g)) {
        x = xm;
        g = gm;
        if (accepted_gradients) accepted_gradients->push_back(g);
      } else {
        if (gm > 0.0) lo = std::max(lo, xm);
        if (gm < 0.0) hi = std::min(hi, xm);
      }
    }
  }
  if (std::abs(g) < tol) {
    res.mode = x;
    res.iterations = kMaxIterations;
    res.sigma = sigma_at(target, x);
    return res;
  }
  std::ostringstream os;
  os << "mode search did not converge in " << kMaxIterations << " iterations (t = " << x << ", phi' = " << g << ")";
  fail(Errc::convergence_failure, os.str());
}

ModeResult locate_mode(const ConditionalTarget& target, double lambda_z, std::optional<double> start) {
  const double kappa = default_kappa(lambda_z);
  auto bracket = bracket_mode(target, lambda_z, kappa);
  ModeResult res = find_mode(target, bracket, start);
  // A mode sitting on the padded endpoint means rounding defeated the bound: widen once.
  const bool at_hi = bracket.second > 0.0 && res.mode >= bracket.second;
  const bool at_lo = bracket.first < 0.0 && res.mode <= bracket.first;
  if (at_hi || at_lo) {
    if (at_hi) bracket.second += kappa;
    if (at_lo) bracket.first -= kappa;
    res = find_mode(target, bracket, res.mode);
  }
  return res;
}

ModeResult scan_mode(const ConditionalTarget& target, double lo, double hi, int points) {
  if (!(lo < hi) || points < 3) fail(Errc::invalid_argument, "scan needs lo < hi and at least 3 points");
  const double step = (hi - lo) / (points - 1);
  constexpr int kMaxShifts = 20;

  int best = 0;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int shift = 0;; ++shift) {
    double best_val = -std::numeric_limits<double>::infinity();
    best = -1;
    for (int i = 0; i < points; ++i) {
      grid[static_cast<std::size_t>(i)] = lo + i * step;
      const double v = target.logpdf(grid[static_cast<std::size_t>(i)]);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    if (best < 0) fail(Errc::numeric_failure, "target is -inf over the whole scan window");
    const bool on_edge = best == 0 || best == points - 1;
    if (!on_edge || shift == kMaxShifts) break;
    const double offset = (best == 0 ? -1.0 : 1.0) * 0.5 * (hi - lo);
    lo += offset;
    hi += offset;
  }

  // Golden-section refinement on the neighbouring cells.
  double a = grid[static_cast<std::size_t>(std::max(best - 1, 0))];
  double b = grid[static_cast<std::size_t>(std::min(best + 1, points - 1))];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = target.logpdf(c);
  double fd = target.logpdf(d);
  int it = 0;
  while (b - a > 1e-9 * std::max(1.0, std::abs(a) + std::abs(b)) && it < 200) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = target.logpdf(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = target.logpdf(d);
    }
    ++it;
  }

  ModeResult res;
  res.mode = 0.5 * (a + b);
  res.iterations = it;
  res.bracket = {lo, hi};
  const double h = 1e-4 * std::max(1.0, std::abs(res.mode));
  const double curv =
      (target.logpdf(res.mode + h) - 2.0 * target.logpdf(res.mode) + target.logpdf(res.mode - h)) / (h * h);
  res.sigma = (curv < 0.0 && std::isfinite(curv)) ? 1.0 / std::sqrt(-curv) : step;
  return res;
}

}  // namespace gsbps
