#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "gsbps/basis.hpp"
#include "gsbps/penalty.hpp"

namespace gsbps {

/// Equal-width histogram: bin midpoints, bin counts and the common width.
struct HistogramData {
  std::vector<double> midpoints;
  std::vector<std::int64_t> counts;
  double binwidth = 0.0;
};

/// Binomial triplets (y_i successes out of m_i trials at covariate x_i).
struct BinomialData {
  std::vector<double> x;
  std::vector<std::int64_t> y;
  std::vector<std::int64_t> m;
};

/// Count series for the Negative-Binomial model. x defaults to 1..n.
struct CountSeriesData {
  std::vector<double> x;
  std::vector<std::int64_t> y;
};

void validate(const HistogramData& data);
void validate(const BinomialData& data);
void validate(const CountSeriesData& data);

enum class ModelKind { poisson, binomial, negbin };

/// One of the three bundled likelihoods together with its data.
class ModelSpec {
 public:
  using Data = std::variant<HistogramData, BinomialData, CountSeriesData>;

  /// Validates the data on construction.
  explicit ModelSpec(Data data);

  [[nodiscard]] ModelKind kind() const noexcept;
  [[nodiscard]] const Data& data() const noexcept { return data_; }
  [[nodiscard]] std::size_t size() const noexcept { return x_.size(); }

  /// Covariate of each observation (bin midpoints for histograms).
  [[nodiscard]] const std::vector<double>& x() const noexcept { return x_; }
  [[nodiscard]] const std::vector<double>& y() const noexcept { return y_; }
  /// Number of trials (binomial only; empty otherwise).
  [[nodiscard]] const std::vector<double>& trials() const noexcept { return m_; }

  /// Basis support: union of the bins for histograms, the data range otherwise.
  [[nodiscard]] std::pair<double, double> support() const;

 private:
  Data data_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

/// Current value of every sampled parameter. rho is set for NegBin only.
struct ModelState {
  std::vector<double> theta;
  double lambda = 1.0;
  double delta = 1.0;
  std::optional<double> rho;
};

/// A univariate log-density (up to an additive constant) with its first and
/// second derivatives, consumed by the mode finder and both samplers.
struct ConditionalTarget {
  std::function<double(double)> logpdf;
  std::function<double(double)> dlogpdf;
  std::function<double(double)> d2logpdf;
  bool declared_logconcave = false;
  /// Support of the density; the bundled targets live on the whole line.
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

/// Linear predictors above this magnitude are rejected with Errc::overflow
/// instead of silently saturating exp().
inline constexpr double kMaxLinearPredictor = 700.0;

double poisson_loglik(std::span<const double> theta, const BasisMatrix& B, const HistogramData& data);
double binom_loglik(std::span<const double> theta, const BasisMatrix& B, const BinomialData& data);
double negbin_loglik(std::span<const double> theta, double rho, const BasisMatrix& B,
                     const CountSeriesData& data);

/// Log-likelihood of any bundled model (rho read from the state for NegBin).
double model_loglik(const ModelSpec& model, const BasisMatrix& B, const ModelState& state);

/// Same as model_loglik but from precomputed linear predictors eta = B theta.
double model_loglik_from_eta(const ModelSpec& model, std::span<const double> eta, std::optional<double> rho);

/// Conditional log-posterior of theta_k (zero-based):
///   phi(t) = -0.5 lambda z t^2 + lambda psi t + l(t; rest).
/// Observations where b_k(x_i) = 0 contribute a constant and are dropped.
ConditionalTarget theta_conditional(const ModelSpec& model, const BasisMatrix& B, const ModelState& state, int k,
                                    const PenaltyModel& pm);

/// As above, reusing cached linear predictors eta = B theta of the current state.
ConditionalTarget theta_conditional(const ModelSpec& model, const BasisMatrix& B, const ModelState& state, int k,
                                    const PenaltyModel& pm, std::span<const double> eta);

/// Conditional log-posterior of log(rho) for the NegBin model under a
/// Gamma(a_rho, b_rho) prior on rho. Derivatives are central differences.
ConditionalTarget rho_conditional(const ModelState& state, const ModelSpec& model, const BasisMatrix& B,
                                  double a_rho, double b_rho);

}  // namespace gsbps
