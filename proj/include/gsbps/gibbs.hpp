#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsbps/basis.hpp"
#include "gsbps/griddy.hpp"
#include "gsbps/penalty.hpp"
#include "gsbps/rng.hpp"
#include "gsbps/targets.hpp"

namespace gsbps {

struct GsbpsConfig {
  int K = 20;
  int r = 2;
  double eps = kDefaultEps;
  int M = 15000;
  int burnin = 5000;
  double nu = 2.0;
  double a_delta = 1e-4;
  double b_delta = 1e-4;
  double a_rho = 1e-4;  ///< NegBin only
  double b_rho = 1e-4;  ///< NegBin only
  double lambda0 = 1.0;
  double ars_c = 2.0;
  int ars_L = 5;
  int grid_size = kDefaultGridSize;
  double c_f = kDefaultCf;
  std::uint64_t seed = 1;
  /// Keep theta at its initial value and run only the conjugate steps.
  bool freeze_theta = false;

  /// Throws Errc::config_error on the first violated constraint.
  void validate() const;
};

/// Defaults for the negative binomial command: a_delta = b_delta = 10, M = 5000.
GsbpsConfig negbin_defaults();

struct Chain {
  /// M x J draws; columns theta_1..theta_K, lambda, delta [, rho].
  Eigen::MatrixXd draws;
  std::vector<std::string> columns;
  GsbpsConfig config;
  int K = 0;
  bool has_rho = false;
  std::vector<double> logpost_trace;
  /// logpdf evaluations spent by the rejection steps of each iteration.
  std::vector<int> ars_eval_counts;
  double wall_time_seconds = 0.0;
  std::vector<std::string> warnings;

  [[nodiscard]] int lambda_col() const { return K; }
  [[nodiscard]] int delta_col() const { return K + 1; }
  [[nodiscard]] int rho_col() const { return K + 2; }
};

/// delta | lambda ~ Gamma(nu/2 + a_delta, lambda nu/2 + b_delta).
double sample_delta(double lambda, const GsbpsConfig& cfg, RandomSource& rng);

/// lambda | theta, delta ~ Gamma((K + nu)/2, (theta' P theta + nu delta)/2).
double sample_lambda(std::span<const double> theta, const PenaltyModel& pm, double delta, const GsbpsConfig& cfg,
                     RandomSource& rng);

/// Starting point: penalized normal equations for count models, a least
/// squares fit of (y+1)/(m-y+1) for the binomial model. Falls back to
/// theta = 0 (reported in `warning` when given) if the system is singular.
ModelState init_state(const ModelSpec& model, const BasisMatrix& B, const PenaltyModel& pm, const GsbpsConfig& cfg,
                      std::string* warning = nullptr);

/// Unnormalized log posterior: likelihood plus every log prior.
double log_posterior(const ModelSpec& model, const BasisMatrix& B, const PenaltyModel& pm, const ModelState& state,
                     const GsbpsConfig& cfg);

/// Knots over the model support with cfg.K basis functions.
KnotVector model_knots(const ModelSpec& model, const GsbpsConfig& cfg);

/// Full chain (burn-in rows included) on the cubic basis over the model support.
Chain run_gsbps(const ModelSpec& model, const GsbpsConfig& cfg);

/// Same, on a caller-supplied basis matrix and penalty (K = B.cols()).
Chain run_gsbps(const ModelSpec& model, const BasisMatrix& B, const PenaltyModel& pm, const GsbpsConfig& cfg);

/// `n_chains` independent chains on separate threads, seeded seed, seed+1, ...
std::vector<Chain> run_chains(const ModelSpec& model, const GsbpsConfig& cfg, int n_chains);

}  // namespace gsbps
