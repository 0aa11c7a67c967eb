#pragma once

#include <cstdint>
#include <random>

namespace gsbps {

/// Seedable generator owned by exactly one chain.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; the variate transforms below are written out by hand rather than
/// taken from <random> distributions so draws are bit-identical across
/// standard library implementations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Gamma with density proportional to x^(shape-1) exp(-rate x).
  double gamma(double shape, double rate);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gsbps
