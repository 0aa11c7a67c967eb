#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gsbps/rng.hpp"
#include "gsbps/targets.hpp"

namespace gsbps {

inline const double kDefaultCf = std::log(0.01);
inline constexpr int kDefaultGridSize = 100;

/// Discrete approximation of a univariate density on equidistant atoms.
struct Grid {
  std::vector<double> points;
  std::vector<double> log_weights;  ///< phi(points) - max phi
  std::vector<double> probs;
};

/// Marches out from the mode with increments sigma, 2 sigma, 4 sigma, ...
/// (cumulative offset (2^(k+1) - 1) sigma) until phi drops c_f below phi(mode),
/// independently on each side.
std::pair<double, double> grow_grid(const ConditionalTarget& target, double mode, double sigma, double c_f);

/// L equidistant atoms on [lo, hi] with probabilities proportional to exp(phi).
Grid build_grid(const ConditionalTarget& target, double lo, double hi, int L);

/// One atom, by inverse CDF over the cumulative probabilities.
double griddy_sample(const Grid& grid, RandomSource& rng);

}  // namespace gsbps
