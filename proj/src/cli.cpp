#include "gsbps/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsbps/diagnostics.hpp"
#include "gsbps/error.hpp"

#ifndef GSBPS_VERSION
#define GSBPS_VERSION "0.0.0"
#endif

namespace gsbps::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string where(const std::string& path, int line) { return path + ":" + std::to_string(line); }

std::int64_t as_count(const Table& t, std::size_t row, int col, const std::string& path) {
  const double v = t.rows[row][static_cast<std::size_t>(col)];
  const std::string name = t.header[static_cast<std::size_t>(col)];
  if (v < 0.0) fail(Errc::parse_error, where(path, t.lines[row]) + ": column '" + name + "' must be nonnegative");
  if (v != std::floor(v) || v > 9.0e15) {
    fail(Errc::parse_error, where(path, t.lines[row]) + ": column '" + name + "' must be an integer");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<double> column_values(const Table& t, int col) {
  std::vector<double> v;
  v.reserve(t.rows.size());
  for (const auto& r : t.rows) v.push_back(r[static_cast<std::size_t>(col)]);
  return v;
}

int require_column(const Table& t, const std::string& name, const std::string& path) {
  const int c = t.column(name);
  if (c < 0) fail(Errc::parse_error, path + ": missing column '" + name + "'");
  return c;
}

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json config_json(const GsbpsConfig& c) {
  return json{{"K", c.K},         {"r", c.r},
              {"eps", c.eps},     {"M", c.M},
              {"burnin", c.burnin}, {"nu", c.nu},
              {"a_delta", c.a_delta}, {"b_delta", c.b_delta},
              {"a_rho", c.a_rho}, {"b_rho", c.b_rho},
              {"lambda0", c.lambda0}, {"ars_c", c.ars_c},
              {"ars_L", c.ars_L}, {"grid_size", c.grid_size},
              {"c_f", c.c_f},     {"seed", c.seed}};
}

GsbpsConfig config_from_json(const json& j) {
  GsbpsConfig c;
  c.K = j.at("K").get<int>();
  c.r = j.at("r").get<int>();
  c.eps = j.at("eps").get<double>();
  c.M = j.at("M").get<int>();
  c.burnin = j.at("burnin").get<int>();
  c.nu = j.at("nu").get<double>();
  c.a_delta = j.at("a_delta").get<double>();
  c.b_delta = j.at("b_delta").get<double>();
  c.a_rho = j.at("a_rho").get<double>();
  c.b_rho = j.at("b_rho").get<double>();
  c.lambda0 = j.at("lambda0").get<double>();
  c.ars_c = j.at("ars_c").get<double>();
  c.ars_L = j.at("ars_L").get<int>();
  c.grid_size = j.at("grid_size").get<int>();
  c.c_f = j.at("c_f").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json summary_json(const ParameterSummary& s) {
  return json{{"mean", s.mean}, {"sd", s.sd}, {"q2.5", s.q025}, {"q50", s.q50}, {"q97.5", s.q975}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(Errc::io_error, "cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot write " + p.string());
  return f;
}

void write_curve(const fs::path& p, const FittedCurve& c) {
  auto f = open_out(p);
  f << "x,estimate,lo95,hi95\n";
  for (std::size_t g = 0; g < c.grid.size(); ++g) {
    f << num(c.grid[g]) << ',' << num(c.estimate[g]) << ',' << num(c.lo95[g]) << ',' << num(c.hi95[g]) << '\n';
  }
  if (!f) fail(Errc::io_error, "write failed for " + p.string());
}

void write_chain(const fs::path& p, const Chain& chain) {
  auto f = open_out(p);
  f << "iteration";
  for (const auto& name : chain.columns) f << ',' << name;
  f << ",logpost,ars_evals\n";
  for (Eigen::Index i = 0; i < chain.draws.rows(); ++i) {
    f << i + 1;
    for (Eigen::Index j = 0; j < chain.draws.cols(); ++j) f << ',' << num(chain.draws(i, j));
    const auto u = static_cast<std::size_t>(i);
    f << ',' << num(chain.logpost_trace[u]) << ',' << chain.ars_eval_counts[u] << '\n';
  }
  if (!f) fail(Errc::io_error, "write failed for " + p.string());
}

void write_json(const fs::path& p, const json& j) {
  auto f = open_out(p);
  f << j.dump(2) << '\n';
  if (!f) fail(Errc::io_error, "write failed for " + p.string());
}

Link link_for(const std::string& command) { return command == "binom" ? Link::logit : Link::log; }

ModelSpec load_model(const RunRequest& req) {
  if (req.command == "density") return ModelSpec(ingest_density(req.input, req.binning));
  if (req.command == "binom") return ModelSpec(ingest_binom(req.input));
  if (req.command == "negbin") return ModelSpec(ingest_counts(req.input));
  fail(Errc::config_error, "unknown command '" + req.command + "'");
}

struct FitInputs {
  const RunRequest& req;
  const ModelSpec& model;
  const KnotVector& kv;
};

// Writes fit.csv (plus histogram_fit.csv for densities) and summary.json for
// a block of retained draws. `geweke_z` carries one z per column.
void write_fit(const fs::path& dir, const FitInputs& in, const Eigen::MatrixXd& kept, const std::vector<std::string>& columns,
               const std::vector<double>& geweke_z, json extra) {
  const int K = in.kv.dim();
  const FittedCurve curve = fitted_curve(Eigen::MatrixXd(kept.leftCols(K)), in.kv, link_for(in.req.command));
  json summary = std::move(extra);
  if (in.req.command == "density") {
    const auto support = in.model.support();
    const FittedCurve dens = density_estimate(curve, support);
    write_curve(dir / "fit.csv", dens);
    write_curve(dir / "histogram_fit.csv", curve);
    summary["density_integral"] = integrate_curve(dens.grid, dens.estimate, support);
  } else {
    write_curve(dir / "fit.csv", curve);
  }

  const auto stats = summarize_draws(kept);
  json params = json::object();
  json theta = json::array();
  json gz = json::object();
  int pass = 0;
  int tested = 0;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (static_cast<int>(j) < K) {
      theta.push_back(summary_json(stats[j]));
    } else {
      params[columns[j]] = summary_json(stats[j]);
    }
    gz[columns[j]] = std::isfinite(geweke_z[j]) ? json(geweke_z[j]) : json(nullptr);
    if (std::isnan(geweke_z[j])) continue;
    ++tested;
    if (std::abs(geweke_z[j]) < 1.96) ++pass;
  }
  summary["parameters"] = params;
  summary["theta"] = theta;
  summary["geweke"] = gz;
  summary["geweke_pass_rate"] = tested ? json(static_cast<double>(pass) / tested) : json(nullptr);
  summary["n_retained"] = kept.rows();
  write_json(dir / "summary.json", summary);
}

json base_summary(const RunRequest& req, const GsbpsConfig& cfg, int n_chains) {
  return json{{"command", req.command}, {"seed", cfg.seed}, {"config", config_json(cfg)}, {"n_chains", n_chains},
              {"n_iterations", cfg.M}, {"burnin", cfg.burnin}};
}

json chain_fields(const Chain& chain) {
  double evals = 0.0;
  for (int e : chain.ars_eval_counts) evals += e;
  return json{{"runtime_seconds", chain.wall_time_seconds},
              {"mean_ars_evals_per_iteration", evals / static_cast<double>(chain.ars_eval_counts.size())},
              {"warnings", chain.warnings}};
}

// Geweke z per column, NaN when the retained chain is too short for the batch means.
std::vector<double> geweke_or_nan(const Chain& chain) {
  try {
    return geweke(chain);
  } catch (const Error& e) {
    if (e.code() != Errc::insufficient_draws) throw;
    return std::vector<double>(chain.columns.size(), std::numeric_limits<double>::quiet_NaN());
  }
}

void run_single(const RunRequest& req, const ModelSpec& model, const KnotVector& kv, const fs::path& dir,
                const Chain& chain) {
  ensure_dir(dir);
  json extra = base_summary(req, chain.config, 1);
  extra.update(chain_fields(chain));
  const Eigen::MatrixXd kept = retained_draws(chain);
  if (kept.rows() < kMinRetainedDraws) {
    fail(Errc::insufficient_draws, "need at least " + std::to_string(kMinRetainedDraws) + " retained draws");
  }
  write_fit(dir, FitInputs{req, model, kv}, kept, chain.columns, geweke_or_nan(chain), std::move(extra));
  if (req.dump_chain) write_chain(dir / "chain.csv", chain);
}

}  // namespace

int Table::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

Table read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::io_error, "cannot open " + path);
  Table t;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(f, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      std::ostringstream os;
      os << where(path, lineno) << ": expected " << t.header.size() << " fields, found " << cells.size();
      fail(Errc::parse_error, os.str());
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& s = cells[c];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), row[c]);
      if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(row[c])) {
        fail(Errc::parse_error,
             where(path, lineno) + ": column '" + t.header[c] + "' value '" + s + "' is not a finite number");
      }
    }
    t.rows.push_back(std::move(row));
    t.lines.push_back(lineno);
  }
  if (!have_header) fail(Errc::parse_error, path + ": missing header row");
  if (t.rows.empty()) fail(Errc::validation_error, path + ": no data rows");
  return t;
}

HistogramData bin_samples(std::span<const double> samples, const BinningOptions& opts) {
  if (opts.binwidth.has_value() == opts.bins.has_value()) {
    fail(Errc::config_error, "give exactly one of --binwidth and --bins for raw samples");
  }
  if (samples.empty()) fail(Errc::validation_error, "no samples to bin");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const double lo = opts.lower.value_or(*mn);
  int n = 0;
  double w = 0.0;
  if (opts.binwidth) {
    w = *opts.binwidth;
    if (!(w > 0.0)) fail(Errc::config_error, "bin width must be positive");
    const double hi = opts.upper.value_or(*mx);
    n = std::max(1, static_cast<int>(std::ceil((hi - lo) / w - 1e-9)));
  } else {
    n = *opts.bins;
    if (n < 1) fail(Errc::config_error, "number of bins must be positive");
    double hi = opts.upper.value_or(*mx);
    if (!(hi > lo)) hi = lo + 1.0;
    w = (hi - lo) / n;
  }
  const double hi = lo + n * w;

  HistogramData h;
  h.binwidth = w;
  h.counts.assign(static_cast<std::size_t>(n), 0);
  h.midpoints.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) h.midpoints[static_cast<std::size_t>(i)] = lo + (i + 0.5) * w;
  const double tol = 1e-9 * w;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double x = samples[s];
    if (x < lo - tol || x > hi + tol) {
      std::ostringstream os;
      os << "sample " << s + 1 << " (" << x << ") lies outside the histogram range [" << lo << ", " << hi << "]";
      fail(Errc::validation_error, os.str());
    }
    const double q = (x - lo) / w;
    double idx = std::floor(q);
    if (q - idx > 1.0 - 1e-9) idx += 1.0;  // rounding just below a left bin edge
    const int i = std::clamp(static_cast<int>(idx), 0, n - 1);
    ++h.counts[static_cast<std::size_t>(i)];
  }
  return h;
}

HistogramData ingest_density(const std::string& path, const BinningOptions& opts) {
  const Table t = read_csv(path);
  if (t.header.size() == 1 && t.header[0] == "x") {
    const auto xs = column_values(t, 0);
    return bin_samples(xs, opts);
  }
  const int cm = t.column("midpoint");
  const int cc = t.column("count");
  if (cm < 0 || cc < 0) fail(Errc::parse_error, path + ": expected a single column 'x' or columns 'midpoint,count'");
  HistogramData h;
  h.midpoints = column_values(t, cm);
  for (std::size_t i = 0; i < t.rows.size(); ++i) h.counts.push_back(as_count(t, i, cc, path));
  if (h.midpoints.size() > 1) {
    h.binwidth = (h.midpoints.back() - h.midpoints.front()) / static_cast<double>(h.midpoints.size() - 1);
  } else {
    h.binwidth = opts.binwidth.value_or(1.0);
  }
  validate(h);
  return h;
}

BinomialData ingest_binom(const std::string& path) {
  const Table t = read_csv(path);
  const int cx = require_column(t, "x", path);
  const int cy = require_column(t, "y", path);
  const int cm = require_column(t, "m", path);
  BinomialData d;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    d.x.push_back(t.rows[i][static_cast<std::size_t>(cx)]);
    d.y.push_back(as_count(t, i, cy, path));
    d.m.push_back(as_count(t, i, cm, path));
    if (d.y.back() > d.m.back()) {
      std::ostringstream os;
      os << where(path, t.lines[i]) << ": row " << i + 1 << " has y = " << d.y.back() << " > m = " << d.m.back();
      fail(Errc::validation_error, os.str());
    }
  }
  validate(d);
  return d;
}

CountSeriesData ingest_counts(const std::string& path) {
  const Table t = read_csv(path);
  const int cy = require_column(t, "y", path);
  const int cx = t.column("x");
  CountSeriesData d;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double v = t.rows[i][static_cast<std::size_t>(cy)];
    if (v < 0.0 || v != std::floor(v)) {
      fail(Errc::validation_error, where(path, t.lines[i]) + ": y must be a nonnegative integer");
    }
    d.y.push_back(static_cast<std::int64_t>(v));
    d.x.push_back(cx >= 0 ? t.rows[i][static_cast<std::size_t>(cx)] : static_cast<double>(i + 1));
  }
  validate(d);
  return d;
}

void execute(const RunRequest& req) {
  req.cfg.validate();
  if (req.chains < 1) fail(Errc::config_error, "--chains must be at least 1");
  const std::string started = utc_now();
  const ModelSpec model = load_model(req);
  const KnotVector kv = model_knots(model, req.cfg);
  const fs::path out(req.out_dir);
  ensure_dir(out);

  if (req.chains == 1) {
    run_single(req, model, kv, out, run_gsbps(model, req.cfg));
  } else {
    const auto chains = run_chains(model, req.cfg, req.chains);
    std::vector<double> worst(chains.front().columns.size(), 0.0);
    Eigen::MatrixXd pooled;
    double runtime = 0.0;
    json warnings = json::array();
    for (std::size_t i = 0; i < chains.size(); ++i) {
      run_single(req, model, kv, out / ("chain" + std::to_string(i + 1)), chains[i]);
      const auto z = geweke_or_nan(chains[i]);
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (std::isnan(z[j]) || std::abs(z[j]) > std::abs(worst[j])) worst[j] = z[j];
      }
      const Eigen::MatrixXd kept = retained_draws(chains[i]);
      Eigen::MatrixXd next(pooled.rows() + kept.rows(), kept.cols());
      if (pooled.rows() > 0) next.topRows(pooled.rows()) = pooled;
      next.bottomRows(kept.rows()) = kept;
      pooled = std::move(next);
      runtime = std::max(runtime, chains[i].wall_time_seconds);
      for (const auto& w : chains[i].warnings) warnings.push_back("chain " + std::to_string(i + 1) + ": " + w);
    }
    json extra = base_summary(req, req.cfg, req.chains);
    extra["runtime_seconds"] = runtime;
    extra["warnings"] = warnings;
    write_fit(out, FitInputs{req, model, kv}, pooled, chains.front().columns, worst, std::move(extra));
  }

  json manifest{{"command", req.command},
                {"input_path", fs::absolute(req.input).string()},
                {"output_dir", fs::absolute(out).string()},
                {"config", config_json(req.cfg)},
                {"binning",
                 {{"binwidth", optional_json(req.binning.binwidth)},
                  {"bins", optional_json(req.binning.bins)},
                  {"lower", optional_json(req.binning.lower)},
                  {"upper", optional_json(req.binning.upper)}}},
                {"chains", req.chains},
                {"dump_chain", req.dump_chain},
                {"timestamps", {{"started", started}, {"finished", utc_now()}}},
                {"versions",
                 {{"gsbps", GSBPS_VERSION},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)},
                  {"compiler", __VERSION__}}}};
  write_json(out / "manifest.json", manifest);
}

RunRequest load_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::io_error, "cannot open " + path);
  try {
    const json j = json::parse(f);
    RunRequest req;
    req.command = j.at("command").get<std::string>();
    req.input = j.at("input_path").get<std::string>();
    req.out_dir = j.at("output_dir").get<std::string>();
    req.cfg = config_from_json(j.at("config"));
    const json& b = j.at("binning");
    req.binning.binwidth = optional_from<double>(b, "binwidth");
    req.binning.bins = optional_from<int>(b, "bins");
    req.binning.lower = optional_from<double>(b, "lower");
    req.binning.upper = optional_from<double>(b, "upper");
    req.chains = j.at("chains").get<int>();
    req.dump_chain = j.at("dump_chain").get<bool>();
    return req;
  } catch (const json::exception& e) {
    fail(Errc::parse_error, path + ": invalid manifest: " + e.what());
  }
}

namespace {

void add_run_options(CLI::App* sub, RunRequest& req) {
  GsbpsConfig& c = req.cfg;
  sub->add_option("input", req.input, "input CSV file")->required();
  sub->add_option("--K", c.K, "number of cubic B-spline basis functions")->capture_default_str();
  sub->add_option("--r", c.r, "penalty order (2 or 3)")->capture_default_str();
  sub->add_option("--M", c.M, "chain length, burn-in included")->capture_default_str();
  sub->add_option("--burnin", c.burnin, "iterations discarded before summaries")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--adelta", c.a_delta, "Gamma shape of delta")->capture_default_str();
  sub->add_option("--bdelta", c.b_delta, "Gamma rate of delta")->capture_default_str();
  sub->add_option("--nu", c.nu, "degrees of freedom of the lambda prior")->capture_default_str();
  sub->add_option("--arho", c.a_rho, "Gamma shape of rho (negbin)")->capture_default_str();
  sub->add_option("--brho", c.b_rho, "Gamma rate of rho (negbin)")->capture_default_str();
  sub->add_option("--lambda0", c.lambda0, "initial penalty parameter")->capture_default_str();
  sub->add_option("--grid-size", c.grid_size, "Griddy-Gibbs grid points")->capture_default_str();
  sub->add_option("--cf", c.c_f, "grid-grower log-density drop threshold")->capture_default_str();
  sub->add_option("--ars-c", c.ars_c, "initial ARS half-width in Laplace sd units")->capture_default_str();
  sub->add_option("--ars-L", c.ars_L, "initial ARS abscissae")->capture_default_str();
  sub->add_option("--eps", c.eps, "diagonal perturbation of the penalty")->capture_default_str();
  sub->add_option("--out", req.out_dir, "output directory")->capture_default_str();
  sub->add_option("--chains", req.chains, "independent chains run in parallel")->capture_default_str();
  sub->add_flag("--dump-chain", req.dump_chain, "write chain.csv with every draw");
}

int report(const Error& e) {
  const ErrorClass cls = classify(e.code());
  const char* name = cls == ErrorClass::usage ? "usage" : cls == ErrorClass::data ? "data" : "numeric";
  std::cerr << json{{"error", std::string(to_string(e.code()))}, {"class", name}, {"message", e.what()}}.dump()
            << '\n';
  return cls == ErrorClass::usage ? 2 : cls == ErrorClass::data ? 3 : 4;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Bayesian P-spline smoothing with a Gibbs sampler"};
  app.require_subcommand(1);

  RunRequest density;
  density.command = "density";
  RunRequest binom;
  binom.command = "binom";
  RunRequest negbin;
  negbin.command = "negbin";
  negbin.cfg = negbin_defaults();

  auto* d = app.add_subcommand("density", "smooth a histogram with the Poisson model");
  add_run_options(d, density);
  d->add_option("--binwidth", density.binning.binwidth, "bin width for raw samples");
  d->add_option("--bins", density.binning.bins, "number of bins for raw samples");
  d->add_option("--lower", density.binning.lower, "left edge of the first bin");
  d->add_option("--upper", density.binning.upper, "right edge of the histogram range");
  add_run_options(app.add_subcommand("binom", "logistic P-spline regression on x,y,m triplets"), binom);
  add_run_options(app.add_subcommand("negbin", "negative binomial smoothing of a count series"), negbin);

  std::string manifest;
  std::string rerun_out;
  auto* rr = app.add_subcommand("rerun", "repeat a run from its manifest.json");
  rr->add_option("manifest", manifest, "manifest.json of an earlier run")->required();
  rr->add_option("--out", rerun_out, "output directory (defaults to the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report(Error(Errc::config_error, e.what()));
  }

  try {
    if (d->parsed()) {
      execute(density);
    } else if (app.got_subcommand("binom")) {
      execute(binom);
    } else if (app.got_subcommand("negbin")) {
      execute(negbin);
    } else {
      RunRequest req = load_manifest(manifest);
      if (!rerun_out.empty()) req.out_dir = rerun_out;
      execute(req);
    }
  } catch (const Error& e) {
    return report(e);
  } catch (const fs::filesystem_error& e) {
    return report(Error(Errc::io_error, e.what()));
  } catch (const std::exception& e) {
    return report(Error(Errc::numeric_failure, e.what()));
  }
  return 0;
}

}  // namespace gsbps::cli
