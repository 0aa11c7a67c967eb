#include <doctest.h>

#include <cmath>
#include <random>

#include "gsbps/basis.hpp"
#include "gsbps/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gsbps;

TEST_CASE("knot vector on [0,1] with K=10") {
  const auto kv = make_knots(0.0, 1.0, 10);
  REQUIRE(kv.knots.size() == 14);
  CHECK(kv.dim() == 10);
  CHECK(kv.interior_count == 6);
  for (int i = 0; i < 4; ++i) {
    CHECK(kv.knots[static_cast<std::size_t>(i)] == 0.0);
    CHECK(kv.knots[static_cast<std::size_t>(13 - i)] == 1.0);
  }
  for (int j = 1; j <= 6; ++j) CHECK(kv.knots[static_cast<std::size_t>(3 + j)] == doctest::Approx(j / 7.0).epsilon(1e-15));
}

TEST_CASE("K=4 gives the cubic Bernstein basis") {
  const auto kv = make_knots(0.0, 1.0, 4);
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
    const auto b = eval_basis(x, kv);
    const double u = 1.0 - x;
    CHECK(b[0] == doctest::Approx(u * u * u).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(3 * x * u * u).epsilon(1e-14));
    CHECK(b[2] == doctest::Approx(3 * x * x * u).epsilon(1e-14));
    CHECK(b[3] == doctest::Approx(x * x * x).epsilon(1e-14));
  }
}

TEST_CASE("boundary rows are unit vectors") {
  const auto kv = make_knots(4.7, 5.4, 8);
  const auto lo = eval_basis(4.7, kv);
  const auto hi = eval_basis(5.4, kv);
  CHECK(lo[0] == 1.0);
  CHECK(hi[7] == 1.0);
  for (int k = 1; k < 8; ++k) CHECK(lo[static_cast<std::size_t>(k)] == 0.0);
  for (int k = 0; k < 7; ++k) CHECK(hi[static_cast<std::size_t>(k)] == 0.0);
}

TEST_CASE("evaluation agrees with the Cox-de Boor recursion") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = std::uniform_int_distribution<int>(4, 40)(gen);
    const double lo = std::uniform_real_distribution<double>(-5, 5)(gen);
    const double hi = lo + std::uniform_real_distribution<double>(0.1, 10)(gen);
    const auto kv = make_knots(lo, hi, K);
    for (int s = 0; s < 10; ++s) {
      const double x = std::uniform_real_distribution<double>(lo, hi)(gen);
      const auto b = eval_basis(x, kv);
      double sum = 0.0;
      int nonzero = 0;
      for (int k = 0; k < K; ++k) {
        const double v = b[static_cast<std::size_t>(k)];
        CHECK(std::abs(v - oracle::cox_de_boor(kv.knots, k, 3, x)) < 1e-12);
        CHECK(v >= 0.0);
        sum += v;
        nonzero += v != 0.0;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
      CHECK(nonzero <= 4);
    }
  }
}

TEST_CASE("K=5 at the midpoint matches the recursion") {
  const auto kv = make_knots(0.0, 1.0, 5);
  const auto b = eval_basis(0.5, kv);
  for (int k = 0; k < 5; ++k) CHECK(b[static_cast<std::size_t>(k)] == doctest::Approx(oracle::cox_de_boor(kv.knots, k, 3, 0.5)));
}

TEST_CASE("local support") {
  const auto kv = make_knots(0.0, 1.0, 12);
  for (double x = 0.0; x <= 1.0; x += 0.013) {
    const auto b = eval_basis(x, kv);
    for (int k = 0; k < 12; ++k) {
      const auto K = static_cast<std::size_t>(k);
      if (x < kv.knots[K] || x > kv.knots[K + 4]) CHECK(b[K] == 0.0);
    }
  }
}

TEST_CASE("design matrix rows equal eval_basis") {
  const auto kv = make_knots(0.0, 1.0, 10);
  std::vector<double> xs;
  for (std::size_t j = 0; j + 1 < kv.knots.size(); ++j) xs.push_back(0.5 * (kv.knots[j] + kv.knots[j + 1]));
  const auto B = design_matrix(xs, kv);
  REQUIRE(B.rows() == static_cast<Eigen::Index>(xs.size()));
  REQUIRE(B.cols() == 10);
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    CHECK(std::abs(B.row(i).sum() - 1.0) < 1e-12);
    const auto b = eval_basis(xs[static_cast<std::size_t>(i)], kv);
    for (int k = 0; k < 10; ++k) CHECK(B(i, k) == b[static_cast<std::size_t>(k)]);
  }
  const std::vector<double> one{0.3};
  const auto B1 = design_matrix(one, kv);
  CHECK(B1.rows() == 1);
}

TEST_CASE("invalid inputs") {
  CHECK(error_code([] { make_knots(0, 1, 3); }) == Errc::invalid_dimension);
  CHECK(error_code([] { make_knots(1, 1, 10); }) == Errc::invalid_domain);
  const auto kv = make_knots(0, 1, 10);
  CHECK(error_code([&] { eval_basis(1.5, kv); }) == Errc::out_of_support);
  const std::vector<double> xs{0.2, -0.1};
  CHECK(error_code([&] { design_matrix(xs, kv); }) == Errc::out_of_support);
}
