#include "gsbps/basis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "gsbps/error.hpp"

namespace gsbps {

namespace {

constexpr int kCubic = 3;

// Relative slack for points that sit on the boundary up to rounding.
constexpr double kSupportSlack = 1e-10;

}  // namespace

KnotVector make_knots(double lower, double upper, int K) {
  if (K < kCubic + 1) {
    fail(Errc::invalid_dimension, "basis dimension K must be at least 4, got " + std::to_string(K));
  }
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
    std::ostringstream os;
    os << "support must satisfy lower < upper, got [" << lower << ", " << upper << "]";
    fail(Errc::invalid_domain, os.str());
  }

  KnotVector kv;
  kv.lower = lower;
  kv.upper = upper;
  kv.degree = kCubic;
  kv.interior_count = K - kCubic - 1;

  const int segments = kv.interior_count + 1;
  const double h = (upper - lower) / segments;
  kv.knots.reserve(static_cast<std::size_t>(K + kCubic + 1));
  for (int i = 0; i <= kCubic; ++i) kv.knots.push_back(lower);
  for (int i = 1; i < segments; ++i) kv.knots.push_back(lower + i * h);
  for (int i = 0; i <= kCubic; ++i) kv.knots.push_back(upper);
  return kv;
}

std::vector<double> eval_basis(double x, const KnotVector& kv) {
  const int K = kv.dim();
  const int p = kv.degree;
  const double slack = kSupportSlack * (kv.upper - kv.lower);
  if (!(x >= kv.lower - slack && x <= kv.upper + slack)) {
    std::ostringstream os;
    os << "x = " << x << " lies outside the basis support [" << kv.lower << ", " << kv.upper << "]";
    fail(Errc::out_of_support, os.str());
  }
  x = std::clamp(x, kv.lower, kv.upper);

  // Knot span s with knots[s] <= x < knots[s+1]; the right edge belongs to the last span.
  int span = K - 1;
  if (x < kv.upper) {
    const auto it = std::upper_bound(kv.knots.begin() + p, kv.knots.begin() + K + 1, x);
    span = static_cast<int>(it - kv.knots.begin()) - 1;
  }

  // Triangular Cox-de Boor scheme producing the p+1 nonzero values b_{span-p..span}(x).
  std::array<double, kCubic + 1> n{};
  std::array<double, kCubic + 1> left{};
  std::array<double, kCubic + 1> right{};
  n[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - kv.knots[span + 1 - j];
    right[j] = kv.knots[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    n[j] = saved;
  }

  std::vector<double> out(static_cast<std::size_t>(K), 0.0);
  for (int j = 0; j <= p; ++j) out[static_cast<std::size_t>(span - p + j)] = n[j];
  return out;
}

BasisMatrix design_matrix(std::span<const double> xs, const KnotVector& kv) {
  const int K = kv.dim();
  BasisMatrix B = BasisMatrix::Zero(static_cast<Eigen::Index>(xs.size()), K);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto row = eval_basis(xs[i], kv);
    for (int k = 0; k < K; ++k) B(static_cast<Eigen::Index>(i), k) = row[static_cast<std::size_t>(k)];
  }
  return B;
}

}  // namespace gsbps
