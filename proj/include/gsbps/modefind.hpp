#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gsbps/targets.hpp"

namespace gsbps {

struct ModeResult {
  double mode = 0.0;
  double sigma = 1.0;  ///< (-phi''(mode))^(-1/2)
  int iterations = 0;
  std::pair<double, double> bracket{0.0, 0.0};
};

/// Default bracket padding: ten conditional-prior standard deviations.
double default_kappa(double lambda_z);

/// Interval guaranteed to hold the mode of a strictly log-concave target
/// whose log-likelihood part is concave, given lambda_z = lambda * z_r(k):
///   phi'(0) < 0  ->  [phi'(0)/lambda_z - kappa, 0]
///   phi'(0) > 0  ->  [0, phi'(0)/lambda_z + kappa]
///   phi'(0) = 0  ->  [0, 0]
std::pair<double, double> bracket_mode(const ConditionalTarget& target, double lambda_z, double kappa);

/// Safeguarded Newton on phi' inside the bracket. A Newton step is kept only
/// when it stays inside the current bracket and shrinks |phi'|; otherwise the
/// bracket is bisected. Stops when |phi'| < 1e-8 (1 + |phi'(0)|).
///
/// `start` seeds the Newton iteration (clamped into the bracket). When
/// `accepted_gradients` is given it receives phi' at every accepted iterate.
ModeResult find_mode(const ConditionalTarget& target, std::pair<double, double> bracket,
                     std::optional<double> start = std::nullopt, std::vector<double>* accepted_gradients = nullptr);

/// Bracket with the default kappa, then find_mode; widens the bracket by one
/// kappa when the mode lands on an endpoint.
ModeResult locate_mode(const ConditionalTarget& target, double lambda_z, std::optional<double> start = std::nullopt);

/// Mode of a target with no concavity guarantee: a 101-point scan over
/// [lo, hi] (shifted outward while the maximum sits on the scan boundary),
/// then golden-section refinement. sigma comes from a central second
/// difference at the mode.
ModeResult scan_mode(const ConditionalTarget& target, double lo = -10.0, double hi = 10.0, int points = 101);

}  // namespace gsbps
