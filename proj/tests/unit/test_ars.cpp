#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "gsbps/ars.hpp"
#include "oracles.hpp"
#include "random_models.hpp"
#include "test_support.hpp"

using namespace gsbps;

namespace {

ConditionalTarget normal_target(double mean = 0.0, double sd = 1.0) {
  ConditionalTarget t;
  t.logpdf = [=](double x) { return -0.5 * (x - mean) * (x - mean) / (sd * sd); };
  t.dlogpdf = [=](double x) { return -(x - mean) / (sd * sd); };
  t.d2logpdf = [=](double) { return -1.0 / (sd * sd); };
  t.declared_logconcave = true;
  return t;
}

double logistic_cdf(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ConditionalTarget logistic_target() {
  ConditionalTarget t;
  t.logpdf = [](double x) { return -x - 2.0 * std::log1p(std::exp(-x)); };
  t.dlogpdf = [](double x) { return 1.0 - 2.0 * logistic_cdf(x); };
  t.d2logpdf = [](double x) { return -2.0 * logistic_cdf(x) * (1.0 - logistic_cdf(x)); };
  t.declared_logconcave = true;
  return t;
}

// Gamma(shape 5, rate 2) on (0, inf).
ConditionalTarget gamma_target() {
  ConditionalTarget t;
  t.logpdf = [](double x) { return 4.0 * std::log(x) - 2.0 * x; };
  t.dlogpdf = [](double x) { return 4.0 / x - 2.0; };
  t.d2logpdf = [](double x) { return -4.0 / (x * x); };
  t.declared_logconcave = true;
  t.lower = 0.0;
  return t;
}

ModeResult mode_at(double mode, double sigma) {
  ModeResult m;
  m.mode = mode;
  m.sigma = sigma;
  return m;
}

std::vector<double> ars_draws(const ConditionalTarget& t, const ModeResult& m, std::uint64_t seed, int n) {
  RandomSource rng(seed);
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (auto& x : xs) x = ars_sample(t, m, rng).value;
  return xs;
}

// Independent mass of one tangent segment: integral of exp(f + b (t - x)) on [u, v].
double segment_mass(double x, double f, double b, double u, double v) {
  if (b == 0.0) return std::exp(f) * (v - u);
  const double hi = std::isinf(v) ? 0.0 : std::exp(f + b * (v - x));
  const double lo = std::isinf(u) ? 0.0 : std::exp(f + b * (u - x));
  return (hi - lo) / b;
}

double hull_mass_oracle(const HullState& hs) {
  double total = 0.0;
  const std::size_t L = hs.abscissae.size();
  for (std::size_t l = 0; l < L; ++l) {
    const double u = l == 0 ? hs.lower : hs.breakpoints[l - 1];
    const double v = l + 1 == L ? hs.upper : hs.breakpoints[l];
    total += segment_mass(hs.abscissae[l], hs.phi[l], hs.dphi[l], u, v);
  }
  return total;
}

}  // namespace

TEST_CASE("initial hull for the standard normal") {
  const auto t = normal_target();
  const auto hs = init_hull(t, mode_at(0.0, 1.0), 2.0, 5);
  REQUIRE(hs.abscissae.size() == 5);
  const double want[] = {-2, -1, 0, 1, 2};
  for (int i = 0; i < 5; ++i) CHECK(hs.abscissae[static_cast<std::size_t>(i)] == doctest::Approx(want[i]));
  CHECK(hs.dphi[0] > 0);
  CHECK(hs.dphi[1] > 0);
  CHECK(hs.dphi[2] == 0);
  CHECK(hs.dphi[3] < 0);
  CHECK(hs.dphi[4] < 0);

  for (std::size_t l = 0; l < hs.breakpoints.size(); ++l) {
    CHECK(hs.breakpoints[l] >= hs.abscissae[l]);
    CHECK(hs.breakpoints[l] <= hs.abscissae[l + 1]);
  }
  CHECK(std::exp(hs.total_log_mass) == doctest::Approx(hull_mass_oracle(hs)).epsilon(1e-12));
  double lse = 0.0;
  for (double m : hs.segment_log_masses) lse += std::exp(m - hs.total_log_mass);
  CHECK(lse == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hull identities at abscissae and breakpoints") {
  const std::pair<ConditionalTarget, ModeResult> cases[] = {
      {normal_target(1.0, 2.0), mode_at(1.0, 2.0)},
      {logistic_target(), mode_at(0.0, 2.0)},
      {gamma_target(), mode_at(2.0, 1.0)},
  };
  for (const auto& [t, m] : cases) {
    const auto hs = init_hull(t, m);
    for (std::size_t l = 0; l < hs.abscissae.size(); ++l) {
      const double x = hs.abscissae[l];
      CHECK(lower_hull(hs, x) == doctest::Approx(t.logpdf(x)).epsilon(1e-14));
      CHECK(upper_hull(hs, x) == doctest::Approx(t.logpdf(x)).epsilon(1e-14));
    }
    for (std::size_t l = 0; l < hs.breakpoints.size(); ++l) {
      const double z = hs.breakpoints[l];
      const double left = hs.phi[l] + (z - hs.abscissae[l]) * hs.dphi[l];
      const double right = hs.phi[l + 1] + (z - hs.abscissae[l + 1]) * hs.dphi[l + 1];
      CHECK(left == doctest::Approx(right).epsilon(1e-12));
    }
    const double mid = 0.5 * (hs.abscissae[1] + hs.abscissae[2]);
    CHECK(lower_hull(hs, mid) == doctest::Approx(0.5 * (hs.phi[1] + hs.phi[2])).epsilon(1e-14));
    CHECK(lower_hull(hs, hs.abscissae.front() - 1e-3) == -std::numeric_limits<double>::infinity());
    CHECK(lower_hull(hs, hs.abscissae.back() + 1e-3) == -std::numeric_limits<double>::infinity());
    CHECK(std::exp(hs.total_log_mass) == doctest::Approx(hull_mass_oracle(hs)).epsilon(1e-12));
  }
}

TEST_CASE("sandwich on randomized log-concave targets") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto check_sandwich = [&](const ConditionalTarget& t, const HullState& hs, double lo, double hi) {
    for (int i = 0; i < 10'000; ++i) {
      const double x = lo + (hi - lo) * unif(gen);
      const double f = t.logpdf(x);
      REQUIRE(lower_hull(hs, x) <= f + 1e-10 * std::max(1.0, std::abs(f)));
      REQUIRE(f <= upper_hull(hs, x) + 1e-10 * std::max(1.0, std::abs(f)));
    }
  };
  for (int rep = 0; rep < 5; ++rep) {
    const double mean = 10.0 * unif(gen) - 5.0;
    const double sd = 0.1 + 3.0 * unif(gen);
    const auto t = normal_target(mean, sd);
    check_sandwich(t, init_hull(t, mode_at(mean, sd)), mean - 8 * sd, mean + 8 * sd);
  }
  check_sandwich(logistic_target(), init_hull(logistic_target(), mode_at(0.0, 2.0)), -15, 15);
  check_sandwich(gamma_target(), init_hull(gamma_target(), mode_at(2.0, 1.0)), 1e-3, 12);
  for (auto kind : {ModelKind::poisson, ModelKind::binomial, ModelKind::negbin}) {
    auto p = fixtures::random_problem(kind, gen);
    for (int k : {0, 4, 9}) {
      const auto t = theta_conditional(p.model, p.B, p.state, k, p.pm);
      const auto m = locate_mode(t, p.state.lambda * p.pm.z(k));
      check_sandwich(t, init_hull(t, m), m.mode - 6 * m.sigma, m.mode + 6 * m.sigma);
    }
  }
}

TEST_CASE("hull refinement is monotone and tightens") {
  const auto t = normal_target();
  auto hs = init_hull(t, mode_at(0.0, 1.0));
  std::vector<double> grid;
  for (double x = -8.0; x <= 8.0; x += 0.05) grid.push_back(x);
  // Excess envelope mass over the normalising constant sqrt(2 pi).
  auto excess = [&] { return std::exp(hs.total_log_mass) / std::sqrt(2.0 * M_PI) - 1.0; };
  const double excess0 = excess();
  RandomSource rng(4);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> up(grid.size()), low(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      up[j] = upper_hull(hs, grid[j]);
      low[j] = lower_hull(hs, grid[j]);
    }
    const double before = excess();
    const double x = sample_hull(hs, rng);
    insert_abscissa(hs, x, t.logpdf(x), t.dlogpdf(x));
    REQUIRE(excess() <= before + 1e-14);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      REQUIRE(upper_hull(hs, grid[j]) <= up[j] + 1e-12);
      REQUIRE(lower_hull(hs, grid[j]) >= low[j] - 1e-12);
    }
  }
  CHECK(excess() > 0.0);
  CHECK(excess() < 0.25 * excess0);
  CHECK(std::is_sorted(hs.abscissae.begin(), hs.abscissae.end()));

  // Duplicates and a full hull leave it unchanged.
  const auto n = hs.abscissae.size();
  CHECK_FALSE(insert_abscissa(hs, hs.abscissae[2], hs.phi[2], hs.dphi[2]));
  CHECK_FALSE(insert_abscissa(hs, 0.123, t.logpdf(0.123), t.dlogpdf(0.123), static_cast<int>(n)));
  CHECK(hs.abscissae.size() == n);
}

TEST_CASE("envelope inverse CDF") {
  SUBCASE("flat segment is uniform") {
    const auto hs = build_hull({0.5}, {0.0}, {0.0}, 0.0, 1.0);
    for (double u : {0.1, 0.25, 0.5, 0.9}) CHECK(hull_inverse_cdf(hs, u) == doctest::Approx(u).epsilon(1e-14));
  }
  SUBCASE("sloped segment gives truncated-exponential quantiles") {
    for (double b : {-3.0, 0.7, 5.0}) {
      const auto hs = build_hull({0.5}, {0.0}, {b}, 0.0, 1.0);
      for (int i = 1; i <= 9; ++i) {
        const double u = 0.1 * i;
        const double want = std::log1p(u * std::expm1(b)) / b;
        CHECK(hull_inverse_cdf(hs, u) == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
  SUBCASE("segment frequencies match segment masses") {
    const auto hs = init_hull(normal_target(), mode_at(0.0, 1.0));
    RandomSource rng(8);
    constexpr int n = 100'000;
    std::vector<int> counts(hs.abscissae.size(), 0);
    for (int i = 0; i < n; ++i) {
      const double x = sample_hull(hs, rng);
      const auto seg = std::upper_bound(hs.breakpoints.begin(), hs.breakpoints.end(), x) - hs.breakpoints.begin();
      ++counts[static_cast<std::size_t>(seg)];
    }
    for (std::size_t l = 0; l < counts.size(); ++l) {
      const double p = std::exp(hs.segment_log_masses[l] - hs.total_log_mass);
      const double se = std::sqrt(p * (1 - p) / n);
      CHECK(std::abs(counts[l] / double(n) - p) < 3 * se);
    }
  }
}

TEST_CASE("ARS draws are exact") {
  constexpr int n = 100'000;
  const auto xs = ars_draws(normal_target(), mode_at(0.0, 1.0), 101, n);
  CHECK(oracle::ks_statistic(xs, oracle::normal_cdf) < 0.006);

  const auto ls = ars_draws(logistic_target(), mode_at(0.0, 2.0), 102, n);
  CHECK(oracle::ks_statistic(ls, logistic_cdf) < 0.006);

  const auto gs = ars_draws(gamma_target(), mode_at(2.0, 1.0), 103, n);
  CHECK(oracle::ks_statistic(gs, [](double x) { return oracle::gamma_p(5.0, 2.0 * x); }) < 0.006);
  double mean = 0.0;
  for (double g : gs) mean += g;
  mean /= n;
  CHECK(std::abs(mean - 2.5) < 3.0 * std::sqrt(5.0 / 4.0 / n));
}

TEST_CASE("a tight quadratic is accepted on the first candidate") {
  const auto t = normal_target(0.3, 0.8);
  RandomSource rng(9);
  int first = 0;
  constexpr int runs = 10'000;
  for (int i = 0; i < runs; ++i) first += ars_sample(t, mode_at(0.3, 0.8), rng).candidates == 1;
  CHECK(first / double(runs) >= 0.9);
}

TEST_CASE("logpdf evaluations per draw stay low on spline conditionals") {
  std::mt19937_64 gen(33);
  RandomSource rng(10);
  long evals = 0;
  long draws = 0;
  for (auto kind : {ModelKind::poisson, ModelKind::binomial, ModelKind::negbin}) {
    auto p = fixtures::random_problem(kind, gen);
    for (int k = 0; k < 10; ++k) {
      const auto t = theta_conditional(p.model, p.B, p.state, k, p.pm);
      const auto m = locate_mode(t, p.state.lambda * p.pm.z(k));
      for (int i = 0; i < 200; ++i) {
        evals += ars_sample(t, m, rng).evals;
        ++draws;
      }
    }
  }
  CHECK(static_cast<double>(evals) / static_cast<double>(draws) < 3.0);
}

TEST_CASE("ARS failure modes") {
  RandomSource rng(1);
  auto convex = normal_target();
  convex.declared_logconcave = false;
  CHECK(error_code([&] { ars_sample(convex, mode_at(0.0, 1.0), rng); }) == Errc::invalid_argument);

  // Increasing everywhere: no abscissa ever has a negative slope.
  ConditionalTarget rising;
  rising.logpdf = [](double x) { return x; };
  rising.dlogpdf = [](double) { return 1.0; };
  rising.declared_logconcave = true;
  CHECK(error_code([&] { init_hull(rising, mode_at(0.0, 1.0)); }) == Errc::initialization_failure);

  // Rejects every candidate once the hull is built.
  auto stalling = normal_target();
  auto calls = std::make_shared<int>(0);
  stalling.logpdf = [calls](double x) {
    return ++*calls > 2 ? -std::numeric_limits<double>::infinity() : -0.5 * x * x;
  };
  // Two abscissae close together leave almost no room for squeeze acceptance.
  ArsOptions opts;
  opts.c = 0.01;
  opts.initial_points = 2;
  opts.max_rejections = 5;
  CHECK(error_code([&] { ars_sample(stalling, mode_at(0.0, 1.0), rng, opts); }) == Errc::sampler_stall);

  CHECK(error_code([] { build_hull({0.0}, {0.0}, {0.0}); }) == Errc::envelope_error);
  CHECK(error_code([] { build_hull({}, {}, {}); }) == Errc::invalid_argument);
}
