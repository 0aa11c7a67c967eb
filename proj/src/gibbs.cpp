#include "gsbps/gibbs.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "gsbps/ars.hpp"
#include "gsbps/error.hpp"
#include "gsbps/modefind.hpp"

namespace gsbps {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) fail(Errc::config_error, what);
}

std::vector<std::string> column_names(int K, bool has_rho) {
  std::vector<std::string> names;
  for (int k = 1; k <= K; ++k) names.push_back("theta" + std::to_string(k));
  names.emplace_back("lambda");
  names.emplace_back("delta");
  if (has_rho) names.emplace_back("rho");
  return names;
}

std::string describe(const ModelState& s) {
  std::ostringstream os;
  os << "lambda=" << s.lambda << ", delta=" << s.delta;
  if (s.rho) os << ", rho=" << *s.rho;
  os << ", theta=(";
  for (std::size_t k = 0; k < s.theta.size(); ++k) os << (k ? "," : "") << s.theta[k];
  os << ")";
  return os.str();
}

Eigen::VectorXd eta_of(const BasisMatrix& B, const std::vector<double>& theta) {
  return B * Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
}

}  // namespace

void GsbpsConfig::validate() const {
  require(r == 2 || r == 3, "penalty order r must be 2 or 3");
  require(K >= 2 * r + 1, "K must be at least 2r + 1");
  require(eps > 0.0, "eps must be positive");
  require(M >= 1, "chain length M must be positive");
  require(burnin >= 0 && burnin < M, "burn-in must satisfy 0 <= burnin < M");
  require(nu > 0.0, "nu must be positive");
  require(a_delta > 0.0 && b_delta > 0.0, "a_delta and b_delta must be positive");
  require(a_rho > 0.0 && b_rho > 0.0, "a_rho and b_rho must be positive");
  require(lambda0 > 0.0, "lambda0 must be positive");
  require(ars_c > 0.0, "ARS constant c must be positive");
  require(ars_L >= 2, "ARS needs at least 2 initial abscissae");
  require(grid_size >= 2, "grid size must be at least 2");
  require(c_f < 0.0, "grid threshold c_f must be negative");
}

GsbpsConfig negbin_defaults() {
  GsbpsConfig cfg;
  cfg.a_delta = 10.0;
  cfg.b_delta = 10.0;
  cfg.M = 5000;
  cfg.burnin = 1000;
  return cfg;
}

double sample_delta(double lambda, const GsbpsConfig& cfg, RandomSource& rng) {
  if (!(lambda > 0.0)) fail(Errc::invalid_argument, "lambda must be positive");
  return rng.gamma(0.5 * cfg.nu + cfg.a_delta, 0.5 * lambda * cfg.nu + cfg.b_delta);
}

double sample_lambda(std::span<const double> theta, const PenaltyModel& pm, double delta, const GsbpsConfig& cfg,
                     RandomSource& rng) {
  if (!(delta > 0.0)) fail(Errc::invalid_argument, "delta must be positive");
  const double K = static_cast<double>(theta.size());
  return rng.gamma(0.5 * (K + cfg.nu), 0.5 * (pm.quad_form(theta) + cfg.nu * delta));
}

ModelState init_state(const ModelSpec& model, const BasisMatrix& B, const PenaltyModel& pm, const GsbpsConfig& cfg,
                      std::string* warning) {
  const auto n = static_cast<Eigen::Index>(model.size());
  const Eigen::Index K = B.cols();
  if (B.rows() != n || pm.K != K) fail(Errc::dimension_mismatch, "basis, penalty and data dimensions disagree");

  Eigen::MatrixXd lhs;
  Eigen::VectorXd rhs(n);
  const auto& y = model.y();
  if (model.kind() == ModelKind::binomial) {
    const auto& m = model.trials();
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      rhs(i) = (y[u] + 1.0) / (m[u] - y[u] + 1.0);
    }
    lhs = B.transpose() * B;
    rhs = B.transpose() * rhs;
  } else {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double y1 = y[static_cast<std::size_t>(i)] + 1.0;
      w(i) = y1;
      rhs(i) = y1 * std::log(y1);
    }
    lhs = B.transpose() * w.asDiagonal() * B + cfg.lambda0 * pm.P;
    rhs = B.transpose() * rhs;
  }

  ModelState s;
  s.lambda = cfg.lambda0;
  s.delta = cfg.a_delta / cfg.b_delta;
  if (model.kind() == ModelKind::negbin) s.rho = 1.0;
  s.theta.assign(static_cast<std::size_t>(K), 0.0);

  const Eigen::LLT<Eigen::MatrixXd> llt(lhs);
  bool ok = llt.info() == Eigen::Success;
  Eigen::VectorXd theta;
  if (ok) {
    theta = llt.solve(rhs);
    // Reject numerically singular systems: huge or non-finite solutions, or a
    // tiny pivot relative to the largest diagonal entry.
    const Eigen::VectorXd piv = llt.matrixL().toDenseMatrix().diagonal();
    ok = theta.allFinite() && piv.minCoeff() > 1e-7 * piv.maxCoeff() &&
         (B * theta).cwiseAbs().maxCoeff() < kMaxLinearPredictor;
  }
  if (ok) {
    for (Eigen::Index k = 0; k < K; ++k) s.theta[static_cast<std::size_t>(k)] = theta(k);
  } else if (warning) {
    *warning = "initial normal equations are singular; starting from theta = 0";
  }
  return s;
}

double log_posterior(const ModelSpec& model, const BasisMatrix& B, const PenaltyModel& pm, const ModelState& state,
                     const GsbpsConfig& cfg) {
  const double K = static_cast<double>(state.theta.size());
  const double lam = state.lambda;
  const double del = state.delta;
  double lp = model_loglik(model, B, state);
  lp += 0.5 * K * std::log(lam) - 0.5 * lam * pm.quad_form(state.theta);
  const double h = 0.5 * cfg.nu;
  lp += h * std::log(h * del) - std::lgamma(h) + (h - 1.0) * std::log(lam) - h * del * lam;
  lp += (cfg.a_delta - 1.0) * std::log(del) - cfg.b_delta * del;
  if (state.rho) lp += (cfg.a_rho - 1.0) * std::log(*state.rho) - cfg.b_rho * *state.rho;
  return lp;
}

KnotVector model_knots(const ModelSpec& model, const GsbpsConfig& cfg) {
  const auto [lo, hi] = model.support();
  return make_knots(lo, hi, cfg.K);
}

Chain run_gsbps(const ModelSpec& model, const GsbpsConfig& cfg) {
  cfg.validate();
  const KnotVector kv = model_knots(model, cfg);
  const BasisMatrix B = design_matrix(model.x(), kv);
  return run_gsbps(model, B, penalty_matrix(cfg.K, cfg.r, cfg.eps), cfg);
}

Chain run_gsbps(const ModelSpec& model, const BasisMatrix& B, const PenaltyModel& pm, const GsbpsConfig& cfg) {
  if (!(cfg.M >= 1 && cfg.burnin >= 0 && cfg.burnin < cfg.M)) fail(Errc::config_error, "need 0 <= burnin < M");
  const auto start = std::chrono::steady_clock::now();
  const int K = static_cast<int>(B.cols());
  const bool negbin = model.kind() == ModelKind::negbin;

  Chain chain;
  chain.config = cfg;
  chain.config.K = K;
  chain.K = K;
  chain.has_rho = negbin;
  chain.columns = column_names(K, negbin);
  chain.draws.resize(cfg.M, static_cast<Eigen::Index>(chain.columns.size()));
  chain.logpost_trace.reserve(static_cast<std::size_t>(cfg.M));
  chain.ars_eval_counts.reserve(static_cast<std::size_t>(cfg.M));

  std::string warning;
  ModelState s = init_state(model, B, pm, cfg, &warning);
  if (!warning.empty()) chain.warnings.push_back(warning);

  RandomSource rng(cfg.seed);
  const ArsOptions ars{cfg.ars_c, cfg.ars_L};

  int iter = 0;
  int coord = -1;
  try {
    for (iter = 1; iter <= cfg.M; ++iter) {
      coord = -1;
      s.delta = sample_delta(s.lambda, cfg, rng);
      s.lambda = sample_lambda(s.theta, pm, s.delta, cfg, rng);

      int evals = 0;
      if (!cfg.freeze_theta) {
        Eigen::VectorXd eta = eta_of(B, s.theta);
        for (int k = 0; k < K; ++k) {
          coord = k;
          const auto uk = static_cast<std::size_t>(k);
          const ConditionalTarget target =
              theta_conditional(model, B, s, k, pm, std::span<const double>(eta.data(), eta.size()));
          const ModeResult mode = locate_mode(target, s.lambda * pm.z(k), s.theta[uk]);
          const ArsDraw d = ars_sample(target, mode, rng, ars);
          evals += d.evals;
          eta += (d.value - s.theta[uk]) * B.col(k);
          s.theta[uk] = d.value;
        }
      }
      if (negbin) {
        coord = K;
        const ConditionalTarget target = rho_conditional(s, model, B, cfg.a_rho, cfg.b_rho);
        const ModeResult mode = scan_mode(target);
        const auto [lo, hi] = grow_grid(target, mode.mode, mode.sigma, cfg.c_f);
        const Grid grid = build_grid(target, lo, hi, cfg.grid_size);
        s.rho = std::exp(griddy_sample(grid, rng));
      }

      const Eigen::Index row = iter - 1;
      for (int k = 0; k < K; ++k) chain.draws(row, k) = s.theta[static_cast<std::size_t>(k)];
      chain.draws(row, K) = s.lambda;
      chain.draws(row, K + 1) = s.delta;
      if (negbin) chain.draws(row, K + 2) = *s.rho;
      chain.logpost_trace.push_back(log_posterior(model, B, pm, s, cfg));
      chain.ars_eval_counts.push_back(evals);
    }
  } catch (const Error& e) {
    std::ostringstream os;
    os << e.what() << " [iteration " << iter;
    if (coord >= 0 && coord < K) os << ", coordinate theta" << coord + 1;
    if (coord == K) os << ", coordinate rho";
    os << "; state: " << describe(s) << "]";
    throw Error(e.code(), os.str());
  }
  chain.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return chain;
}

std::vector<Chain> run_chains(const ModelSpec& model, const GsbpsConfig& cfg, int n_chains) {
  if (n_chains < 1) fail(Errc::config_error, "need at least one chain");
  cfg.validate();
  const KnotVector kv = model_knots(model, cfg);
  const BasisMatrix B = design_matrix(model.x(), kv);
  const PenaltyModel pm = penalty_matrix(cfg.K, cfg.r, cfg.eps);

  std::vector<Chain> chains(static_cast<std::size_t>(n_chains));
  std::vector<std::exception_ptr> errors(chains.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    workers.emplace_back([&, i] {
      try {
        GsbpsConfig c = cfg;
        c.seed = cfg.seed + i;
        chains[i] = run_gsbps(model, B, pm, c);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return chains;
}

}  // namespace gsbps
