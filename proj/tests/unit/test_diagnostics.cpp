#include <doctest.h>

#include <cmath>
#include <random>

#include "gsbps/diagnostics.hpp"
#include "test_support.hpp"

using namespace gsbps;

namespace {

Chain synthetic_chain(const Eigen::MatrixXd& draws, int burnin, int K) {
  Chain c;
  c.draws = draws;
  c.config.burnin = burnin;
  c.K = K;
  return c;
}

std::vector<double> iid_normal(std::mt19937_64& gen, int n, double mean = 0.0, double sd = 1.0) {
  std::normal_distribution<double> d(mean, sd);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = d(gen);
  return v;
}

}  // namespace

TEST_CASE("type-7 quantiles") {
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
  CHECK(quantile({5.0}, 0.3) == 5.0);
  CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.0) == 1.0);
  CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 1.0) == 4.0);
  CHECK(quantile({0.0, 10.0}, 0.25) == 2.5);
  CHECK(error_code([] { quantile({}, 0.5); }) == Errc::insufficient_draws);
}

TEST_CASE("posterior summaries") {
  std::mt19937_64 gen(1);
  constexpr int n = 100'000;
  Eigen::MatrixXd draws(n + 50, 3);
  const auto normal = iid_normal(gen, n + 50, 3.0, 2.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < n + 50; ++i) {
    draws(i, 0) = 7.25;
    draws(i, 1) = normal[static_cast<std::size_t>(i)];
    draws(i, 2) = unif(gen);
  }
  const auto s = posterior_summary(synthetic_chain(draws, 50, 1));
  REQUIRE(s.size() == 3);
  CHECK(s[0].mean == 7.25);
  CHECK(s[0].sd == 0.0);
  CHECK(s[0].q025 == 7.25);
  CHECK(s[0].q50 == 7.25);
  CHECK(s[0].q975 == 7.25);
  CHECK(std::abs(s[1].mean - 3.0) < 3.0 * 2.0 / std::sqrt(n));
  CHECK(s[1].sd == doctest::Approx(2.0).epsilon(0.01));
  CHECK(std::abs(s[2].q025 - 0.025) < 0.005);
  CHECK(std::abs(s[2].q975 - 0.975) < 0.005);

  CHECK(error_code([&] { posterior_summary(synthetic_chain(draws.topRows(120), 30, 1)); }) ==
        Errc::insufficient_draws);
  CHECK(retained_draws(synthetic_chain(draws.topRows(120), 30, 1)).rows() == 90);
}

TEST_CASE("fitted curves and bands") {
  const auto kv = make_knots(0.0, 1.0, 8);
  std::mt19937_64 gen(2);

  SUBCASE("a single draw collapses the bands") {
    Eigen::MatrixXd one(1, 8);
    for (int k = 0; k < 8; ++k) one(0, k) = 0.3 * k - 1.0;
    for (auto link : {Link::log, Link::logit, Link::identity}) {
      const auto c = fitted_curve(one, kv, link, 50);
      REQUIRE(c.grid.size() == 50);
      CHECK(c.grid.front() == 0.0);
      CHECK(c.grid.back() == 1.0);
      for (std::size_t g = 0; g < c.grid.size(); ++g) {
        CHECK(c.lo95[g] == doctest::Approx(c.estimate[g]).epsilon(1e-14));
        CHECK(c.hi95[g] == doctest::Approx(c.estimate[g]).epsilon(1e-14));
      }
    }
  }
  SUBCASE("bands bracket the estimate and respect the link range") {
    Eigen::MatrixXd draws(2000, 8);
    const auto noise = iid_normal(gen, 2000 * 8, 0.0, 0.2);
    for (int i = 0; i < 2000; ++i) {
      for (int k = 0; k < 8; ++k) draws(i, k) = std::sin(k) + noise[static_cast<std::size_t>(i * 8 + k)];
    }
    for (auto link : {Link::log, Link::logit, Link::identity}) {
      const auto c = fitted_curve(draws, kv, link);
      CHECK(c.grid.size() == static_cast<std::size_t>(kDefaultCurvePoints));
      for (std::size_t g = 0; g < c.grid.size(); ++g) {
        CHECK(c.lo95[g] <= c.estimate[g]);
        CHECK(c.estimate[g] <= c.hi95[g]);
        if (link == Link::logit) {
          CHECK(c.lo95[g] > 0.0);
          CHECK(c.hi95[g] < 1.0);
        }
        if (link == Link::log) CHECK(c.lo95[g] > 0.0);
      }
    }
    // Chain overload uses only retained theta columns.
    Eigen::MatrixXd with_hyper(2000, 10);
    with_hyper.leftCols(8) = draws;
    with_hyper.rightCols(2).setOnes();
    const auto a = fitted_curve(synthetic_chain(with_hyper, 500, 8), kv, Link::identity);
    const auto b = fitted_curve(Eigen::MatrixXd(draws.bottomRows(1500)), kv, Link::identity);
    CHECK(a.estimate == b.estimate);
    CHECK(a.hi95 == b.hi95);
  }
  SUBCASE("errors") {
    CHECK(error_code([&] { fitted_curve(Eigen::MatrixXd(3, 7), kv, Link::log); }) == Errc::dimension_mismatch);
    CHECK(error_code([&] { fitted_curve(Eigen::MatrixXd(3, 8), kv, Link::log, 1); }) == Errc::invalid_argument);
  }
}

TEST_CASE("density normalization") {
  const auto kv = make_knots(0.0, 1.0, 10);
  SUBCASE("constant curve becomes the uniform density") {
    Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(1, 10, std::log(3.7));
    const auto f = density_estimate(fitted_curve(flat, kv, Link::log), {0.0, 1.0});
    for (double v : f.estimate) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("Gaussian bump integrates to one and is scale invariant") {
    const auto kv2 = make_knots(-4.0, 4.0, 25);
    const auto basis_x = [&] {
      std::vector<double> xs;
      for (int i = 0; i < 25; ++i) xs.push_back(-4.0 + 8.0 * i / 24.0);
      return xs;
    }();
    Eigen::MatrixXd th(1, 25);
    for (int k = 0; k < 25; ++k) th(0, k) = -0.5 * basis_x[static_cast<std::size_t>(k)] * basis_x[static_cast<std::size_t>(k)];
    const auto curve = fitted_curve(th, kv2, Link::log);
    const auto f = density_estimate(curve, {-4.0, 4.0});
    CHECK(integrate_curve(f.grid, f.estimate, {-4.0, 4.0}) == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::MatrixXd shifted = th.array() + 2.0;  // mu-hat times e^2
    const auto g = density_estimate(fitted_curve(shifted, kv2, Link::log), {-4.0, 4.0});
    for (std::size_t i = 0; i < f.estimate.size(); ++i) CHECK(g.estimate[i] == doctest::Approx(f.estimate[i]).epsilon(1e-12));

    const auto fine = density_estimate(curve, {-4.0, 4.0}, 4002);
    double sup = 0.0;
    for (std::size_t i = 0; i < f.estimate.size(); ++i) sup = std::max(sup, std::abs(fine.estimate[i] - f.estimate[i]));
    CHECK(sup < 1e-4);
  }
  SUBCASE("only log-link curves are normalized") {
    Eigen::MatrixXd th = Eigen::MatrixXd::Zero(1, 10);
    CHECK(error_code([&] { density_estimate(fitted_curve(th, kv, Link::logit), {0.0, 1.0}); }) ==
          Errc::invalid_argument);
  }
}

TEST_CASE("Geweke diagnostic") {
  std::mt19937_64 gen(3);
  SUBCASE("null calibration on iid draws") {
    // The early window has 31 batches, so z is close to t with 30 df:
    // P(|z| < 1.96) is about 0.941. Allow 3 binomial SE over 500 replicates.
    constexpr int reps = 500;
    int inside = 0;
    for (int rep = 0; rep < reps; ++rep) inside += std::abs(geweke_z(iid_normal(gen, 10'000))) < 1.96;
    const double se = std::sqrt(0.941 * 0.059 / reps);
    CHECK(inside / double(reps) > 0.941 - 3 * se);
    CHECK(inside / double(reps) < 0.941 + 3 * se);
  }
  SUBCASE("mean step") {
    auto col = iid_normal(gen, 10'000);
    for (std::size_t i = col.size() / 2; i < col.size(); ++i) col[i] += 5.0;
    CHECK(std::abs(geweke_z(col)) > 10.0);
  }
  SUBCASE("constant column") { CHECK(geweke_z(std::vector<double>(50, 2.0)) == 0.0); }
  SUBCASE("affine invariance") {
    const auto col = iid_normal(gen, 5000);
    const double z = geweke_z(col);
    for (auto [a, b] : {std::pair{3.0, -2.0}, std::pair{-0.5, 10.0}}) {
      std::vector<double> t(col.size());
      for (std::size_t i = 0; i < col.size(); ++i) t[i] = a * col[i] + b;
      const double zt = geweke_z(t);
      CHECK(std::abs(zt - (a > 0 ? z : -z)) < 1e-10);
    }
  }
  SUBCASE("short windows and bad fractions") {
    CHECK(error_code([&] { geweke_z(iid_normal(gen, 900)); }) == Errc::insufficient_draws);
    CHECK_NOTHROW(geweke_z(iid_normal(gen, 1000)));
    CHECK(error_code([&] { geweke_z(iid_normal(gen, 5000), 0.6, 0.5); }) == Errc::invalid_argument);
  }
  SUBCASE("per-column over retained draws") {
    Eigen::MatrixXd draws(3000, 2);
    const auto a = iid_normal(gen, 3000);
    for (int i = 0; i < 3000; ++i) {
      draws(i, 0) = a[static_cast<std::size_t>(i)];
      draws(i, 1) = i < 1000 ? 100.0 : 1.0;
    }
    const auto z = geweke(synthetic_chain(draws, 1000, 1));
    REQUIRE(z.size() == 2);
    CHECK(z[1] == 0.0);
    std::vector<double> kept(a.begin() + 1000, a.end());
    CHECK(z[0] == geweke_z(kept));
  }
}
