#pragma once

#include <limits>
#include <vector>

#include "gsbps/modefind.hpp"
#include "gsbps/rng.hpp"
#include "gsbps/targets.hpp"

namespace gsbps {

/// Tangent/chord envelopes of a log-concave density built on a sorted set of
/// abscissae. Segment l of the upper hull is the tangent at abscissae[l] and
/// spans [breakpoints[l-1], breakpoints[l]], the outer segments running to the
/// domain bounds. Masses are integrals of exp(upper hull), kept in log space.
struct HullState {
  std::vector<double> abscissae;
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> breakpoints;
  std::vector<double> segment_log_masses;
  double total_log_mass = -std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

struct ArsOptions {
  double c = 2.0;            ///< initial half-width in units of the Laplace sd
  int initial_points = 5;    ///< L
  int max_rejections = 1000;
  int max_abscissae = 100;
};

struct ArsDraw {
  double value = 0.0;
  /// logpdf evaluations made by the accept/reject loop (hull set-up excluded).
  int evals = 0;
  /// Envelope candidates drawn, the accepted one included.
  int candidates = 0;
};

/// Hull over the given points. Abscissae closer than 1e-12 are merged.
HullState build_hull(std::vector<double> abscissae, std::vector<double> phi, std::vector<double> dphi,
                     double lower = -std::numeric_limits<double>::infinity(),
                     double upper = std::numeric_limits<double>::infinity());

/// L equidistant abscissae on [mode - c sigma, mode + c sigma], doubling c
/// (at most 30 times) until the outer tangents bound a finite mass.
HullState init_hull(const ConditionalTarget& target, const ModeResult& mode, double c = 2.0, int L = 5);

/// Chord through neighbouring abscissae; -inf outside [first, last] abscissa.
double lower_hull(const HullState& hs, double t);

/// Tangent of the segment owning t; -inf outside the domain bounds.
double upper_hull(const HullState& hs, double t);

/// Inverse CDF of the normalized envelope exp(upper_hull) / exp(total_log_mass).
double hull_inverse_cdf(const HullState& hs, double u);

/// One exact draw from the normalized envelope.
double sample_hull(const HullState& hs, RandomSource& rng);

/// Adds (t, phi(t), phi'(t)) to the hull. Returns false when the point was a
/// duplicate or the hull is already at `cap` abscissae.
bool insert_abscissa(HullState& hs, double t, double phi_t, double dphi_t, int cap = 100);

/// Adaptive rejection sampling with squeeze test and hull refinement on
/// every rejection.
ArsDraw ars_sample(const ConditionalTarget& target, const ModeResult& mode, RandomSource& rng,
                   const ArsOptions& options = {});

}  // namespace gsbps
