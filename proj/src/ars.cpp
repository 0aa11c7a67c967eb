#include "gsbps/ars.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gsbps/error.hpp"

namespace gsbps {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;
constexpr double kFlatSlope = 1e-12;
constexpr int kMaxDoublings = 30;

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// log of the integral of exp(phi + slope (t - x)) over [u, v].
double segment_log_mass(double x, double phi, double slope, double u, double v) {
  if (!(v > u)) return kNegInf;
  if (std::abs(slope) < kFlatSlope) {
    if (!std::isfinite(u) || !std::isfinite(v)) {
      fail(Errc::envelope_error, "flat tangent on an unbounded hull segment");
    }
    return phi + slope * (0.5 * (u + v) - x) + std::log(v - u);
  }
  if (slope > 0.0) {
    if (!std::isfinite(v)) fail(Errc::envelope_error, "rising tangent on the right-unbounded hull segment");
    return phi + slope * (v - x) + std::log(-std::expm1(-slope * (v - u))) - std::log(slope);
  }
  if (!std::isfinite(u)) fail(Errc::envelope_error, "falling tangent on the left-unbounded hull segment");
  return phi + slope * (u - x) + std::log(-std::expm1(slope * (v - u))) - std::log(-slope);
}

double segment_lo(const HullState& hs, std::size_t l) { return l == 0 ? hs.lower : hs.breakpoints[l - 1]; }

double segment_hi(const HullState& hs, std::size_t l) {
  return l + 1 == hs.abscissae.size() ? hs.upper : hs.breakpoints[l];
}

void rebuild(HullState& hs) {
  const std::size_t L = hs.abscissae.size();
  hs.breakpoints.resize(L == 0 ? 0 : L - 1);
  for (std::size_t l = 0; l + 1 < L; ++l) {
    const double x0 = hs.abscissae[l];
    const double x1 = hs.abscissae[l + 1];
    const double d0 = hs.dphi[l];
    const double d1 = hs.dphi[l + 1];
    double z = 0.5 * (x0 + x1);
    if (std::abs(d0 - d1) >= kTieTol) {
      z = (hs.phi[l + 1] - hs.phi[l] + x0 * d0 - x1 * d1) / (d0 - d1);
      if (!std::isfinite(z)) z = 0.5 * (x0 + x1);
    }
    hs.breakpoints[l] = std::clamp(z, x0, x1);
  }
  hs.segment_log_masses.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    hs.segment_log_masses[l] =
        segment_log_mass(hs.abscissae[l], hs.phi[l], hs.dphi[l], segment_lo(hs, l), segment_hi(hs, l));
  }
  hs.total_log_mass = log_sum_exp(hs.segment_log_masses);
  if (!std::isfinite(hs.total_log_mass)) {
    fail(Errc::envelope_error, "envelope mass is not finite");
  }
}

void evaluate_at(const ConditionalTarget& target, double t, double& phi, double& dphi) {
  phi = target.logpdf(t);
  dphi = target.dlogpdf(t);
  if (!std::isfinite(phi) || !std::isfinite(dphi)) {
    std::ostringstream os;
    os << "target is not finite at hull abscissa t = " << t;
    fail(Errc::envelope_error, os.str());
  }
}

}  // namespace

HullState build_hull(std::vector<double> abscissae, std::vector<double> phi, std::vector<double> dphi,
                     double lower, double upper) {
  if (abscissae.empty() || phi.size() != abscissae.size() || dphi.size() != abscissae.size()) {
    fail(Errc::invalid_argument, "hull needs matching, nonempty abscissa/value/derivative arrays");
  }
  std::vector<std::size_t> order(abscissae.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return abscissae[a] < abscissae[b]; });

  HullState hs;
  hs.lower = lower;
  hs.upper = upper;
  for (auto i : order) {
    if (!hs.abscissae.empty() &&
        abscissae[i] - hs.abscissae.back() < kTieTol * std::max(1.0, std::abs(abscissae[i]))) {
      continue;
    }
    hs.abscissae.push_back(abscissae[i]);
    hs.phi.push_back(phi[i]);
    hs.dphi.push_back(dphi[i]);
  }
  rebuild(hs);
  return hs;
}

HullState init_hull(const ConditionalTarget& target, const ModeResult& mode, double c, int L) {
  if (!(c > 0.0)) fail(Errc::invalid_argument, "hull half-width constant c must be positive");
  if (L < 2) fail(Errc::invalid_argument, "hull needs at least 2 initial abscissae");
  if (!(mode.sigma > 0.0)) fail(Errc::invalid_argument, "mode sigma must be positive");

  for (int doubling = 0; doubling <= kMaxDoublings; ++doubling, c *= 2.0) {
    double left = mode.mode - c * mode.sigma;
    double right = mode.mode + c * mode.sigma;
    if (left <= target.lower) left = target.lower + 0.5 * (mode.mode - target.lower);
    if (right >= target.upper) right = target.upper - 0.5 * (target.upper - mode.mode);

    std::vector<double> xs(static_cast<std::size_t>(L));
    std::vector<double> fs(xs.size());
    std::vector<double> ds(xs.size());
    for (int i = 0; i < L; ++i) {
      const auto u = static_cast<std::size_t>(i);
      xs[u] = left + (right - left) * i / (L - 1);
      evaluate_at(target, xs[u], fs[u], ds[u]);
    }
    const bool left_ok = std::isfinite(target.lower) || ds.front() > 0.0;
    const bool right_ok = std::isfinite(target.upper) || ds.back() < 0.0;
    if (left_ok && right_ok) return build_hull(std::move(xs), std::move(fs), std::move(ds), target.lower, target.upper);
  }
  std::ostringstream os;
  os << "could not place hull abscissae on both sides of the mode " << mode.mode << " after " << kMaxDoublings
     << " doublings";
  fail(Errc::initialization_failure, os.str());
}

double lower_hull(const HullState& hs, double t) {
  const auto& x = hs.abscissae;
  if (t < x.front() || t > x.back()) return kNegInf;
  if (t == x.back()) return hs.phi.back();
  const auto l = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
  return (hs.phi[l] * (x[l + 1] - t) + hs.phi[l + 1] * (t - x[l])) / (x[l + 1] - x[l]);
}

double upper_hull(const HullState& hs, double t) {
  if (t < hs.lower || t > hs.upper) return kNegInf;
  const auto l = static_cast<std::size_t>(std::upper_bound(hs.breakpoints.begin(), hs.breakpoints.end(), t) -
                                          hs.breakpoints.begin());
  return hs.phi[l] + (t - hs.abscissae[l]) * hs.dphi[l];
}

double hull_inverse_cdf(const HullState& hs, double u) {
  const std::size_t L = hs.abscissae.size();
  double acc = 0.0;
  std::size_t seg = L - 1;
  double mass = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    mass = std::exp(hs.segment_log_masses[l] - hs.total_log_mass);
    if (u < acc + mass || l + 1 == L) {
      seg = l;
      break;
    }
    acc += mass;
  }
  const double w = mass > 0.0 ? std::clamp((u - acc) / mass, 0.0, 1.0) : 0.5;
  const double lo = segment_lo(hs, seg);
  const double hi = segment_hi(hs, seg);
  const double b = hs.dphi[seg];
  double t = 0.0;
  if (std::abs(b) < kFlatSlope) {
    t = lo + w * (hi - lo);
  } else if (b > 0.0) {
    t = hi + std::log(w + (1.0 - w) * std::exp(-b * (hi - lo))) / b;
  } else {
    t = lo + std::log((1.0 - w) + w * std::exp(b * (hi - lo))) / b;
  }
  return std::clamp(t, lo, hi);
}

double sample_hull(const HullState& hs, RandomSource& rng) {
  if (!std::isfinite(hs.total_log_mass)) fail(Errc::envelope_error, "envelope mass is not finite");
  return hull_inverse_cdf(hs, rng.uniform());
}

bool insert_abscissa(HullState& hs, double t, double phi_t, double dphi_t, int cap) {
  if (static_cast<int>(hs.abscissae.size()) >= cap) return false;
  if (!std::isfinite(phi_t) || !std::isfinite(dphi_t)) return false;
  auto& x = hs.abscissae;
  const auto pos = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), t) - x.begin());
  const double tol = kTieTol * std::max(1.0, std::abs(t));
  if ((pos < x.size() && x[pos] - t < tol) || (pos > 0 && t - x[pos - 1] < tol)) return false;
  const auto off = static_cast<std::ptrdiff_t>(pos);
  x.insert(x.begin() + off, t);
  hs.phi.insert(hs.phi.begin() + off, phi_t);
  hs.dphi.insert(hs.dphi.begin() + off, dphi_t);
  rebuild(hs);
  return true;
}

ArsDraw ars_sample(const ConditionalTarget& target, const ModeResult& mode, RandomSource& rng,
                   const ArsOptions& options) {
  if (!target.declared_logconcave) fail(Errc::invalid_argument, "adaptive rejection sampling needs a log-concave target");
  HullState hs = init_hull(target, mode, options.c, options.initial_points);
  ArsDraw out;
  for (int rejections = 0;;) {
    const double t = sample_hull(hs, rng);
    ++out.candidates;
    const double log_u = std::log(rng.uniform());
    const double up = upper_hull(hs, t);
    if (log_u <= lower_hull(hs, t) - up) {
      out.value = t;
      return out;
    }
    const double phi_t = target.logpdf(t);
    ++out.evals;
    if (log_u <= phi_t - up) {
      out.value = t;
      return out;
    }
    if (++rejections >= options.max_rejections) {
      std::ostringstream os;
      os << "adaptive rejection sampler stalled after " << rejections << " rejections near t = " << t;
      fail(Errc::sampler_stall, os.str());
    }
    if (std::isfinite(phi_t)) insert_abscissa(hs, t, phi_t, target.dlogpdf(t), options.max_abscissae);
  }
}

}  // namespace gsbps
