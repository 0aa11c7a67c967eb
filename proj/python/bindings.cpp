#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gsbps/basis.hpp"
#include "gsbps/diagnostics.hpp"
#include "gsbps/error.hpp"
#include "gsbps/gibbs.hpp"
#include "gsbps/penalty.hpp"

namespace py = pybind11;
using namespace gsbps;

namespace {

GsbpsConfig make_config(const py::dict& kw, GsbpsConfig cfg) {
  for (const auto& item : kw) {
    const auto key = item.first.cast<std::string>();
    const py::handle v = item.second;
    if (key == "K") cfg.K = v.cast<int>();
    else if (key == "r") cfg.r = v.cast<int>();
    else if (key == "eps") cfg.eps = v.cast<double>();
    else if (key == "M") cfg.M = v.cast<int>();
    else if (key == "burnin") cfg.burnin = v.cast<int>();
    else if (key == "nu") cfg.nu = v.cast<double>();
    else if (key == "a_delta") cfg.a_delta = v.cast<double>();
    else if (key == "b_delta") cfg.b_delta = v.cast<double>();
    else if (key == "a_rho") cfg.a_rho = v.cast<double>();
    else if (key == "b_rho") cfg.b_rho = v.cast<double>();
    else if (key == "lambda0") cfg.lambda0 = v.cast<double>();
    else if (key == "ars_c") cfg.ars_c = v.cast<double>();
    else if (key == "ars_L") cfg.ars_L = v.cast<int>();
    else if (key == "grid_size") cfg.grid_size = v.cast<int>();
    else if (key == "c_f") cfg.c_f = v.cast<double>();
    else if (key == "seed") cfg.seed = v.cast<std::uint64_t>();
    else throw py::key_error("unknown configuration key '" + key + "'");
  }
  return cfg;
}

struct FitResult {
  Chain chain;
  FittedCurve curve;
};

FitResult fit(const ModelSpec& model, const GsbpsConfig& cfg, Link link) {
  py::gil_scoped_release release;
  FitResult res{run_gsbps(model, cfg), {}};
  const KnotVector kv = model_knots(model, cfg);
  res.curve = fitted_curve(res.chain, kv, link);
  if (model.kind() == ModelKind::poisson) res.curve = density_estimate(res.curve, model.support());
  return res;
}

py::dict to_dict(const FitResult& r) {
  py::dict out;
  out["draws"] = r.chain.draws;
  out["columns"] = r.chain.columns;
  out["burnin"] = r.chain.config.burnin;
  out["logpost"] = r.chain.logpost_trace;
  try {
    out["geweke"] = geweke(r.chain);
  } catch (const Error&) {
    out["geweke"] = py::none();
  }
  out["warnings"] = r.chain.warnings;
  out["x"] = r.curve.grid;
  out["estimate"] = r.curve.estimate;
  out["lo95"] = r.curve.lo95;
  out["hi95"] = r.curve.hi95;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gibbs sampling for Bayesian P-splines";

  static py::exception<Error> exc(m, "GsbpsError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      exc((std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def(
      "design_matrix",
      [](const std::vector<double>& x, double lower, double upper, int K) {
        return design_matrix(x, make_knots(lower, upper, K));
      },
      py::arg("x"), py::arg("lower"), py::arg("upper"), py::arg("K"),
      "n x K cubic B-spline matrix on equidistant knots over [lower, upper].");

  m.def(
      "penalty_matrix",
      [](int K, int r, double eps) { return penalty_matrix(K, r, eps).P; }, py::arg("K"), py::arg("r") = 2,
      py::arg("eps") = kDefaultEps, "Difference penalty D'D + eps I.");

  m.def(
      "geweke_z",
      [](const std::vector<double>& x, double frac_a, double frac_b) { return geweke_z(x, frac_a, frac_b); },
      py::arg("x"), py::arg("frac_a") = 0.1, py::arg("frac_b") = 0.5);

  m.def(
      "fit_density",
      [](const std::vector<double>& midpoints, const std::vector<std::int64_t>& counts, const py::kwargs& kw) {
        HistogramData h;
        h.midpoints = midpoints;
        h.counts = counts;
        if (midpoints.size() > 1) {
          h.binwidth = (midpoints.back() - midpoints.front()) / static_cast<double>(midpoints.size() - 1);
        } else {
          h.binwidth = 1.0;
        }
        return to_dict(fit(ModelSpec(std::move(h)), make_config(kw, GsbpsConfig{}), Link::log));
      },
      py::arg("midpoints"), py::arg("counts"),
      "Histogram smoothing; returns draws and the normalized density curve with 95% bands.");

  m.def(
      "fit_binomial",
      [](const std::vector<double>& x, const std::vector<std::int64_t>& y, const std::vector<std::int64_t>& trials,
         const py::kwargs& kw) {
        return to_dict(fit(ModelSpec(BinomialData{x, y, trials}), make_config(kw, GsbpsConfig{}), Link::logit));
      },
      py::arg("x"), py::arg("y"), py::arg("m"), "Logistic P-spline regression on success counts.");

  m.def(
      "fit_negbin",
      [](const std::vector<std::int64_t>& y, std::optional<std::vector<double>> x, const py::kwargs& kw) {
        std::vector<double> xs = x.value_or(std::vector<double>{});
        if (xs.empty()) {
          for (std::size_t i = 0; i < y.size(); ++i) xs.push_back(static_cast<double>(i + 1));
        }
        return to_dict(fit(ModelSpec(CountSeriesData{xs, y}), make_config(kw, negbin_defaults()), Link::log));
      },
      py::arg("y"), py::arg("x") = py::none(), "Negative binomial smoothing of a count series.");
}
