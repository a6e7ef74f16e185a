#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sparsepc/detection.hpp"
#include "sparsepc/reduction.hpp"

namespace sparsepc {

struct GridSpec {
  std::vector<int> d{30};
  std::vector<int> n{1000};
  std::vector<int> k{2};
  std::vector<double> theta{0.0};
  std::vector<std::string> family{"gaussian"};
  std::vector<std::string> statistic{"sparse_eig"};
  std::vector<std::string> threshold_mode{"calibrated"};
};

struct SweepSpec {
  double theta_min = 0.0;
  double theta_max = 1.5;
  int steps = 12;
  int trials_per_probe = 200;
};

struct ReductionSpec {
  double alpha = 1.0;
  double mu = 0.1;
  double gamma = 0.1;
  double relaxed_delta = 0.0;  // > 0 switches selection to relaxed mode at this delta
};

/// Full specification of a Monte Carlo run. Every field has a default and
/// the complete effective configuration is echoed into result metadata.
struct ExperimentConfig {
  std::string mode = "error-table";  // error-table | rate-sweep | reduction-demo
  std::uint64_t seed = 0;
  int trials = 100;
  double delta = 0.05;
  std::string out_dir = "results";
  std::string format = "both";  // csv | json | both
  int threads = 1;              // 0 = hardware concurrency
  int calibration_trials = 200;
  std::uint64_t support_budget = kDefaultSupportBudget;
  GridSpec grid;
  SweepSpec sweep;
  ReductionSpec reduction;

  void validate() const;
  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_string(const std::string& text);
  std::string to_json() const;
};

/// One trial's outcome. `stream_key` fingerprints the RNG stream that
/// produced the dataset, so any row can be recomputed in isolation.
struct TrialRecord {
  int cell = 0;
  int trial = 0;
  std::string hypothesis;  // "H0" or "H1"
  std::uint64_t stream_key = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  bool reject = false;
  int iterations = 0;
  double gap = 0.0;
};

struct CellSummary {
  int cell = 0;
  int d = 0, n = 0, k = 0;
  double theta = 0.0;
  std::string family, statistic, threshold_mode;
  bool skipped = false;
  std::string skip_reason;
  bool in_regime = false;
  double tau = 0.0;
  int trials = 0;
  double type1 = 0.0, type2 = 0.0, max_error = 0.0;
  double se_type1 = 0.0, se_type2 = 0.0;
};

struct SweepProbe {
  int cell = 0;
  int step = 0;
  double theta = 0.0;
  double type2 = 0.0;
  int trials = 0;
};

struct SweepCell {
  int cell = 0;
  int d = 0, n = 0, k = 0;
  std::string statistic, family;
  double tau_calibrated = 0.0;
  double boundary = 0.0, bracket_lo = 0.0, bracket_hi = 0.0;
  double theta_star = 0.0;  // sqrt(k log d / n)
  double ratio_to_theta_star = 0.0;
  double ratio_to_sqrt_k_theta_star = 0.0;
  bool monotone_warning = false;
  bool undetectable = false;  // type II above delta even at theta_max
};

struct ReductionCell {
  int cell = 0;
  int d = 0, n = 0, k = 0;
  std::string statistic;
  bool skipped = false;
  std::string skip_reason;
  long long m = 0, kappa = 0, branch_constant = 0;
  bool large_k_branch = false;
  double theta_bar = 0.0, branch_lower_bound = 0.0, realized_rate_constant = 0.0;
  bool cond_a = false, cond_b = false, cond_c = false;
  bool sandwich_lower = false, sandwich_upper = false, theta_bound = false;
  bool regime_r0 = false, regime_extra = false;
  int trials = 0;
  double null_mean = 0.0, null_sd = 0.0;
  double planted_mean = 0.0, planted_sd = 0.0;
  double rank_sum_z = 0.0, rank_sum_p = 0.0;  // one-sided: planted > null
};

struct ErrorTableResult {
  std::vector<TrialRecord> trials;
  std::vector<CellSummary> cells;
};

struct RateSweepResult {
  std::vector<SweepProbe> probes;
  std::vector<SweepCell> cells;
};

struct ReductionDemoResult {
  std::vector<TrialRecord> trials;
  std::vector<ReductionCell> cells;
  bool any_feasible = false;
};

/// For each grid cell, runs `trials` null and `trials` alternative datasets
/// against the configured threshold and writes per-trial records plus
/// per-cell error aggregates (CSV and/or JSON under out_dir).
ErrorTableResult run_error_experiment(const ExperimentConfig& cfg);

/// Bisection over theta for the empirical detection boundary at calibrated
/// thresholds, one axis of (d, n, k) varying.
RateSweepResult run_rate_sweep(const ExperimentConfig& cfg);

/// Planted-vs-null separation of each statistic after the bottom-left
/// transform, with full parameter-validation transcripts.
ReductionDemoResult run_reduction_demo(const ExperimentConfig& cfg);

/// Deterministic worker pool: body(i) for i in [0, count); results must be
/// written to preassigned slots so scheduling cannot affect output.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

/// One-sided Mann-Whitney rank-sum test (greater > baseline), normal
/// approximation with tie correction and continuity correction.
struct RankSumResult {
  double z = 0.0;
  double p_value = 1.0;
};
RankSumResult rank_sum_greater(const std::vector<double>& baseline,
                               const std::vector<double>& greater);

}  // namespace sparsepc
