#include "gsbps/targets.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>

#include "gsbps/error.hpp"

namespace gsbps {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_nonnegative(std::span<const std::int64_t> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0) {
      fail(Errc::validation_error, std::string(what) + " must be nonnegative (row " + std::to_string(i + 1) + ")");
    }
  }
}

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      fail(Errc::validation_error, std::string(what) + " must be finite (row " + std::to_string(i + 1) + ")");
    }
  }
}

std::vector<double> to_double(std::span<const std::int64_t> v) { return {v.begin(), v.end()}; }

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double checked_exp(double eta) {
  if (eta > kMaxLinearPredictor) {
    std::ostringstream os;
    os << "linear predictor " << eta << " exceeds " << kMaxLinearPredictor;
    throw Error(Errc::overflow, os.str());
  }
  return std::exp(eta);
}

void check_dims(std::span<const double> theta, const BasisMatrix& B, std::size_t n) {
  if (static_cast<Eigen::Index>(theta.size()) != B.cols() || static_cast<std::size_t>(B.rows()) != n) {
    std::ostringstream os;
    os << "dimension mismatch: theta has " << theta.size() << " entries, basis is " << B.rows() << "x" << B.cols()
       << ", data has " << n << " rows";
    fail(Errc::dimension_mismatch, os.str());
  }
}

Eigen::VectorXd linear_predictor(std::span<const double> theta, const BasisMatrix& B) {
  const Eigen::Map<const Eigen::VectorXd> t(theta.data(), static_cast<Eigen::Index>(theta.size()));
  return B * t;
}

// Per-observation log-likelihood in the linear predictor, parameter-only terms dropped.
struct Observation {
  double y = 0.0;
  double m = 0.0;  // binomial trials
};

double negbin_eta_term(double y, double rho, double eta) {
  // y*eta - (y + rho) * log(rho + exp(eta))
  const double lr = std::log(rho);
  const double hi = std::max(lr, eta);
  const double log_sum = hi + std::log1p(std::exp(-std::abs(eta - lr)));
  return y * eta - (y + rho) * log_sum;
}

double negbin_rho_terms(double y, double rho) {
  return std::lgamma(y + rho) - std::lgamma(rho) + rho * std::log(rho);
}

void check_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    fail(Errc::invalid_argument, "overdispersion rho must be positive and finite, got " + std::to_string(rho));
  }
}

// Active rows of one coefficient's conditional: everything the target needs.
struct CoefficientSlice {
  ModelKind kind = ModelKind::poisson;
  double lambda_z = 0.0;
  double lambda_psi = 0.0;
  double rho = 0.0;
  std::vector<double> offset;  // eta_i - theta_k b_ik
  std::vector<double> b;
  std::vector<double> y;
  std::vector<double> m;  // binomial trials, or y + rho for negbin
};

struct Derivs {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

template <int Order>
Derivs evaluate(const CoefficientSlice& s, double t) {
  Derivs out;
  out.f = -0.5 * s.lambda_z * t * t + s.lambda_psi * t;
  out.d1 = -s.lambda_z * t + s.lambda_psi;
  out.d2 = -s.lambda_z;
  for (std::size_t i = 0; i < s.b.size(); ++i) {
    const double bi = s.b[i];
    const double eta = s.offset[i] + t * bi;
    switch (s.kind) {
      case ModelKind::poisson: {
        const double mu = checked_exp(eta);
        if constexpr (Order == 0) out.f += s.y[i] * eta - mu;
        if constexpr (Order == 1) out.d1 += (s.y[i] - mu) * bi;
        if constexpr (Order == 2) out.d2 -= mu * bi * bi;
        break;
      }
      case ModelKind::binomial: {
        if constexpr (Order == 0) {
          out.f += s.y[i] * eta - s.m[i] * softplus(eta);
        } else {
          const double p = logistic(eta);
          if constexpr (Order == 1) out.d1 += (s.y[i] - s.m[i] * p) * bi;
          if constexpr (Order == 2) out.d2 -= s.m[i] * p * (1.0 - p) * bi * bi;
        }
        break;
      }
      case ModelKind::negbin: {
        if constexpr (Order == 0) {
          out.f += negbin_eta_term(s.y[i], s.rho, eta);
        } else {
          // d/deta log(rho + e^eta) = logistic(eta - log rho)
          const double p = logistic(eta - std::log(s.rho));
          if constexpr (Order == 1) out.d1 += (s.y[i] - s.m[i] * p) * bi;
          if constexpr (Order == 2) out.d2 -= s.m[i] * p * (1.0 - p) * bi * bi;
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace

void validate(const HistogramData& data) {
  const auto n = data.midpoints.size();
  if (n == 0) fail(Errc::validation_error, "histogram has no bins");
  if (data.counts.size() != n) fail(Errc::validation_error, "midpoints and counts differ in length");
  if (!(data.binwidth > 0.0) || !std::isfinite(data.binwidth)) {
    fail(Errc::validation_error, "bin width must be positive");
  }
  require_finite(data.midpoints, "midpoints");
  require_nonnegative(data.counts, "counts");
  const double tol = 1e-9 * std::max(1.0, data.binwidth);
  for (std::size_t i = 1; i < n; ++i) {
    const double gap = data.midpoints[i] - data.midpoints[i - 1];
    if (std::abs(gap - data.binwidth) > tol) {
      fail(Errc::validation_error,
           "midpoints must be equally spaced at the bin width (row " + std::to_string(i + 1) + ")");
    }
  }
}

void validate(const BinomialData& data) {
  const auto n = data.x.size();
  if (n == 0) fail(Errc::validation_error, "binomial data has no rows");
  if (data.y.size() != n || data.m.size() != n) fail(Errc::validation_error, "x, y and m differ in length");
  require_finite(data.x, "x");
  for (std::size_t i = 0; i < n; ++i) {
    if (data.m[i] < 1) fail(Errc::validation_error, "m must be positive (row " + std::to_string(i + 1) + ")");
    if (data.y[i] < 0 || data.y[i] > data.m[i]) {
      fail(Errc::validation_error, "y must satisfy 0 <= y <= m (row " + std::to_string(i + 1) + ")");
    }
  }
}

void validate(const CountSeriesData& data) {
  if (data.y.empty()) fail(Errc::validation_error, "count series is empty");
  if (data.x.size() != data.y.size()) fail(Errc::validation_error, "x and y differ in length");
  require_finite(data.x, "x");
  require_nonnegative(data.y, "y");
}

ModelSpec::ModelSpec(Data data) : data_(std::move(data)) {
  std::visit(overloaded{
                 [this](HistogramData& d) {
                   validate(d);
                   x_ = d.midpoints;
                   y_ = to_double(d.counts);
                 },
                 [this](BinomialData& d) {
                   validate(d);
                   x_ = d.x;
                   y_ = to_double(d.y);
                   m_ = to_double(d.m);
                 },
                 [this](CountSeriesData& d) {
                   if (d.x.empty()) {
                     d.x.resize(d.y.size());
                     for (std::size_t i = 0; i < d.x.size(); ++i) d.x[i] = static_cast<double>(i + 1);
                   }
                   validate(d);
                   x_ = d.x;
                   y_ = to_double(d.y);
                 },
             },
             data_);
}

ModelKind ModelSpec::kind() const noexcept {
  switch (data_.index()) {
    case 0: return ModelKind::poisson;
    case 1: return ModelKind::binomial;
    default: return ModelKind::negbin;
  }
}

std::pair<double, double> ModelSpec::support() const {
  if (const auto* h = std::get_if<HistogramData>(&data_)) {
    return {h->midpoints.front() - 0.5 * h->binwidth, h->midpoints.back() + 0.5 * h->binwidth};
  }
  const auto [lo, hi] = std::minmax_element(x_.begin(), x_.end());
  if (*lo < *hi) return {*lo, *hi};
  // A single distinct covariate value has no range; centre a unit interval on it.
  return {*lo - 0.5, *hi + 0.5};
}

double poisson_loglik(std::span<const double> theta, const BasisMatrix& B, const HistogramData& data) {
  check_dims(theta, B, data.counts.size());
  const Eigen::VectorXd eta = linear_predictor(theta, B);
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    ll += static_cast<double>(data.counts[static_cast<std::size_t>(i)]) * eta(i) - checked_exp(eta(i));
  }
  return ll;
}

double binom_loglik(std::span<const double> theta, const BasisMatrix& B, const BinomialData& data) {
  check_dims(theta, B, data.y.size());
  const Eigen::VectorXd eta = linear_predictor(theta, B);
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    ll += static_cast<double>(data.y[u]) * eta(i) - static_cast<double>(data.m[u]) * softplus(eta(i));
  }
  return ll;
}

double negbin_loglik(std::span<const double> theta, double rho, const BasisMatrix& B,
                     const CountSeriesData& data) {
  check_rho(rho);
  check_dims(theta, B, data.y.size());
  const Eigen::VectorXd eta = linear_predictor(theta, B);
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double y = static_cast<double>(data.y[static_cast<std::size_t>(i)]);
    ll += negbin_rho_terms(y, rho) + negbin_eta_term(y, rho, eta(i));
  }
  return ll;
}

double model_loglik_from_eta(const ModelSpec& model, std::span<const double> eta, std::optional<double> rho) {
  if (eta.size() != model.size()) fail(Errc::dimension_mismatch, "linear predictor length differs from data");
  const auto& y = model.y();
  double ll = 0.0;
  switch (model.kind()) {
    case ModelKind::poisson:
      for (std::size_t i = 0; i < eta.size(); ++i) ll += y[i] * eta[i] - checked_exp(eta[i]);
      break;
    case ModelKind::binomial:
      for (std::size_t i = 0; i < eta.size(); ++i) ll += y[i] * eta[i] - model.trials()[i] * softplus(eta[i]);
      break;
    case ModelKind::negbin: {
      if (!rho) fail(Errc::invalid_argument, "negative binomial model requires rho");
      check_rho(*rho);
      for (std::size_t i = 0; i < eta.size(); ++i) {
        ll += negbin_rho_terms(y[i], *rho) + negbin_eta_term(y[i], *rho, eta[i]);
      }
      break;
    }
  }
  return ll;
}

double model_loglik(const ModelSpec& model, const BasisMatrix& B, const ModelState& state) {
  check_dims(state.theta, B, model.size());
  const Eigen::VectorXd eta = linear_predictor(state.theta, B);
  return model_loglik_from_eta(model, {eta.data(), static_cast<std::size_t>(eta.size())}, state.rho);
}

ConditionalTarget theta_conditional(const ModelSpec& model, const BasisMatrix& B, const ModelState& state, int k,
                                    const PenaltyModel& pm) {
  check_dims(state.theta, B, model.size());
  const Eigen::VectorXd eta = linear_predictor(state.theta, B);
  return theta_conditional(model, B, state, k, pm, {eta.data(), static_cast<std::size_t>(eta.size())});
}

ConditionalTarget theta_conditional(const ModelSpec& model, const BasisMatrix& B, const ModelState& state, int k,
                                    const PenaltyModel& pm, std::span<const double> eta) {
  if (k < 0 || k >= pm.K) fail(Errc::invalid_argument, "coefficient index out of range: " + std::to_string(k));
  check_dims(state.theta, B, model.size());
  if (eta.size() != model.size()) fail(Errc::dimension_mismatch, "linear predictor length differs from data");
  if (!(state.lambda > 0.0)) fail(Errc::invalid_precision, "lambda must be positive");

  auto slice = std::make_shared<CoefficientSlice>();
  slice->kind = model.kind();
  slice->lambda_z = state.lambda * pm.z(k);
  slice->lambda_psi = state.lambda * pm.psi(state.theta, k);
  if (slice->kind == ModelKind::negbin) {
    if (!state.rho) fail(Errc::invalid_argument, "negative binomial model requires rho");
    check_rho(*state.rho);
    slice->rho = *state.rho;
  }
  const double theta_k = state.theta[static_cast<std::size_t>(k)];
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    const double bik = B(i, k);
    if (bik == 0.0) continue;
    const auto u = static_cast<std::size_t>(i);
    slice->offset.push_back(eta[u] - theta_k * bik);
    slice->b.push_back(bik);
    slice->y.push_back(model.y()[u]);
    switch (slice->kind) {
      case ModelKind::binomial: slice->m.push_back(model.trials()[u]); break;
      case ModelKind::negbin: slice->m.push_back(model.y()[u] + slice->rho); break;
      case ModelKind::poisson: break;
    }
  }

  ConditionalTarget target;
  target.logpdf = [slice](double t) { return evaluate<0>(*slice, t).f; };
  target.dlogpdf = [slice](double t) { return evaluate<1>(*slice, t).d1; };
  target.d2logpdf = [slice](double t) { return evaluate<2>(*slice, t).d2; };
  target.declared_logconcave = true;
  return target;
}

ConditionalTarget rho_conditional(const ModelState& state, const ModelSpec& model, const BasisMatrix& B,
                                  double a_rho, double b_rho) {
  if (model.kind() != ModelKind::negbin) {
    fail(Errc::unsupported_operation, "the overdispersion conditional exists only for the negative binomial model");
  }
  if (!(a_rho > 0.0) || !(b_rho > 0.0)) fail(Errc::invalid_argument, "a_rho and b_rho must be positive");
  check_dims(state.theta, B, model.size());

  const Eigen::VectorXd eta_vec = linear_predictor(state.theta, B);
  auto eta = std::make_shared<const std::vector<double>>(eta_vec.data(), eta_vec.data() + eta_vec.size());
  auto y = std::make_shared<const std::vector<double>>(model.y());

  ConditionalTarget target;
  target.logpdf = [eta, y, a_rho, b_rho](double log_rho) {
    const double rho = std::exp(log_rho);
    if (!(rho > 0.0) || !std::isfinite(rho)) return -std::numeric_limits<double>::infinity();
    double ll = 0.0;
    for (std::size_t i = 0; i < eta->size(); ++i) {
      ll += negbin_rho_terms((*y)[i], rho) + negbin_eta_term((*y)[i], rho, (*eta)[i]);
    }
    return ll + a_rho * log_rho - b_rho * rho;
  };
  auto f = target.logpdf;
  target.dlogpdf = [f](double t) {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    return (f(t + h) - f(t - h)) / (2.0 * h);
  };
  target.d2logpdf = [f](double t) {
    const double h = 1e-4 * std::max(1.0, std::abs(t));
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
  };
  target.declared_logconcave = false;
  return target;
}

}  // namespace gsbps
