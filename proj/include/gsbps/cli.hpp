#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsbps/gibbs.hpp"
#include "gsbps/targets.hpp"

namespace gsbps::cli {

/// Numeric CSV with a mandatory header row. `lines` holds the 1-based file
/// line of every data row for error messages.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<int> lines;

  /// Index of a header column, or -1.
  [[nodiscard]] int column(const std::string& name) const;
};

Table read_csv(const std::string& path);

/// Histogram layout for raw samples. Exactly one of binwidth and bins must be
/// given. The range defaults to [min, max] of the samples; with a binwidth the
/// upper edge is extended to a whole number of bins.
struct BinningOptions {
  std::optional<double> binwidth;
  std::optional<int> bins;
  std::optional<double> lower;
  std::optional<double> upper;
};

/// Half-open bins [a, a + w) with the last bin closed.
HistogramData bin_samples(std::span<const double> samples, const BinningOptions& opts);

/// Either a single `x` column of raw samples (binned with `opts`) or a
/// pre-binned `midpoint,count` table.
HistogramData ingest_density(const std::string& path, const BinningOptions& opts);

/// Columns x, y, m.
BinomialData ingest_binom(const std::string& path);

/// Column y, optional column x (defaults to 1..n).
CountSeriesData ingest_counts(const std::string& path);

struct RunRequest {
  std::string command;  ///< density, binom or negbin
  std::string input;
  std::string out_dir = "gsbps_out";
  GsbpsConfig cfg;
  BinningOptions binning;
  int chains = 1;
  bool dump_chain = false;
};

/// Runs the sampler and writes fit.csv, summary.json, manifest.json and
/// optionally chain.csv (per-chain subdirectories plus a pooled fit when
/// chains > 1). Throws gsbps::Error.
void execute(const RunRequest& req);

/// Request stored in a manifest.json written by execute().
RunRequest load_manifest(const std::string& path);

/// Full command-line entry point; returns the process exit code
/// (0 ok, 2 usage, 3 data, 4 numeric).
int run(int argc, const char* const* argv);

}  // namespace gsbps::cli
