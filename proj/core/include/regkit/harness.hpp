#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regkit/config.hpp"

namespace regkit {

struct ExperimentRecord {
  std::size_t n = 0;
  std::size_t replication = 0;
  double chosen_k = 0.0;
  double estimate = 0.0;
  double truth = 0.0;
  double loss = 0.0;
  double oracle_k = 0.0;
  double oracle_loss = 0.0;
  double influence_norm = 0.0;
  double aux = 0.0;      // design-specific, see list_designs()
  double seconds = 0.0;  // wall time of the cell; kept out of records.csv
};

struct Quantiles {
  double q10 = 0.0, q50 = 0.0, q90 = 0.0;
};

struct NSummary {
  std::size_t n = 0;
  Quantiles loss, oracle_loss, chosen_k, influence_norm, aux;
};

/// Least squares of log(median loss) on log n.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double standard_error = 0.0;  // NaN with fewer than three points
  std::size_t points = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ExperimentRecord> records;  // ordered by (n, replication)
  std::vector<NSummary> summary;
  RateFit rate;
};

struct DesignInfo {
  std::string name;
  std::string description;
  std::string aux;                  // meaning of the aux column
  std::vector<std::string> params;  // accepted parameter keys
};

std::vector<DesignInfo> list_designs();

/// Per-cell seed: hash of (master, design, n, replication).
std::uint64_t cell_seed(std::uint64_t master, const std::string& design, std::size_t n, std::size_t replication);

/// Runs every (n, replication) cell; threads = 0 runs serially. Results do
/// not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads = 0);

/// Type-7 (linear interpolation) quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p);
RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& median_loss);
std::vector<NSummary> summarize(const std::vector<ExperimentRecord>& records);

/// records.csv, summary.json, plotdata.csv and timing.csv in `dir`.
void write_results(const ExperimentResult& result, const std::string& dir);
void write_records_csv(const ExperimentResult& result, const std::string& path);
void write_summary_json(const ExperimentResult& result, const std::string& path);
/// Long format: n,design,metric,q10,q50,q90.
void emit_plotdata(const ExperimentResult& result, const std::string& path);

}  // namespace regkit
