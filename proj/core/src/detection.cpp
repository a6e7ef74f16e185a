#include "sparsepc/detection.hpp"

#include <algorithm>
#include <cmath>

#include "sparsepc/errors.hpp"
#include "sparsepc/sdp.hpp"

namespace sparsepc {

namespace {
constexpr double kEuler = 2.718281828459045235360287471353;
}

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::kSparseEig:
      return "sparse_eig";
    case StatisticKind::kSdp:
      return "sdp";
    case StatisticKind::kDual:
      return "dual";
  }
  return "unknown";
}

StatisticKind statistic_kind_from_string(const std::string& name) {
  if (name == "sparse_eig") return StatisticKind::kSparseEig;
  if (name == "sdp") return StatisticKind::kSdp;
  if (name == "dual") return StatisticKind::kDual;
  throw InvalidArgument("unknown statistic kind: " + name);
}

void DetectionConfig::validate() const {
  if (d < 1 || n < 1 || k < 1) {
    throw InvalidArgument("DetectionConfig: d, n, k must be positive");
  }
  if (k > d) throw InvalidArgument("DetectionConfig: k must not exceed d");
  if (!(delta > 0.0 && delta < 1.0 / 3.0)) {
    throw InvalidArgument("DetectionConfig: delta must lie in (0, 1/3)");
  }
  if (theta < 0.0) throw InvalidArgument("DetectionConfig: theta must be nonnegative");
  if (mu && !(*mu > 0.0 && *mu < 1.0)) {
    throw InvalidArgument("DetectionConfig: mu must lie in (0, 1)");
  }
}

bool in_sparse_regime(const DetectionConfig& cfg) {
  cfg.validate();
  const double lhs =
      15.0 * std::sqrt(cfg.k * std::log(6.0 * kEuler * cfg.d / cfg.delta) / cfg.n);
  if (lhs > 1.0) return false;
  if (static_cast<double>(cfg.k) > std::pow(static_cast<double>(cfg.d), 0.49)) return false;
  if (cfg.mu) {
    if (static_cast<double>(cfg.k) < std::pow(static_cast<double>(cfg.n), *cfg.mu)) return false;
    if (cfg.n >= cfg.d) return false;
  }
  return true;
}

double threshold_sparse_eig(const DetectionConfig& cfg) {
  cfg.validate();
  return 8.0 * std::sqrt(cfg.k * std::log(6.0 * kEuler * cfg.d / (cfg.k * cfg.delta)) / cfg.n);
}

double threshold_sdp(const DetectionConfig& cfg) {
  cfg.validate();
  const double dd = static_cast<double>(cfg.d);
  return 16.0 * std::sqrt(cfg.k * cfg.k * std::log(4.0 * dd * dd / cfg.delta) / cfg.n) +
         1.0 / std::sqrt(static_cast<double>(cfg.n));
}

TestOutcome evaluate_statistic(const SymmetricMatrix& sigma, const DetectionConfig& cfg,
                               StatisticKind kind, std::uint64_t budget) {
  cfg.validate();
  TestOutcome outcome;
  outcome.kind = kind;
  double tau = 0.0;
  switch (kind) {
    case StatisticKind::kSparseEig: {
      outcome.statistic = sparse_eigmax(sigma, cfg.k, budget).value;
      tau = threshold_sparse_eig(cfg);
      break;
    }
    case StatisticKind::kSdp: {
      const double epsilon = 1.0 / std::sqrt(static_cast<double>(cfg.n));
      const SdpSolution sol = sdp_relax(sigma, cfg.k, epsilon);
      outcome.statistic = sol.value;
      outcome.precision = sol.precision;
      outcome.iterations = sol.iterations;
      tau = threshold_sdp(cfg);
      break;
    }
    case StatisticKind::kDual: {
      outcome.statistic = dual_bound(sigma, cfg.k);
      tau = threshold_sdp(cfg);
      break;
    }
  }
  outcome.threshold = 1.0 + tau;
  outcome.reject = outcome.statistic > outcome.threshold;
  return outcome;
}

TestOutcome run_test(const SampleMatrix& x, const DetectionConfig& cfg, StatisticKind kind,
                     std::uint64_t budget) {
  cfg.validate();
  if (x.d() != cfg.d || x.n() != cfg.n) {
    throw InvalidArgument("run_test: sample dimensions do not match the config");
  }
  return evaluate_statistic(empirical_covariance(x), cfg, kind, budget);
}

double empirical_quantile(std::vector<double> values, double delta) {
  if (values.empty()) throw InvalidArgument("empirical_quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double count = static_cast<double>(values.size());
  std::size_t index = static_cast<std::size_t>(std::ceil((1.0 - delta) * count));
  if (index > values.size()) index = values.size();
  if (index < 1) index = 1;
  return values[index - 1];
}

double calibrate_threshold(const DetectionConfig& cfg, StatisticKind kind, int trials,
                           std::uint64_t seed, NullFamily family) {
  cfg.validate();
  if (trials < 100) throw InvalidArgument("calibrate_threshold: need at least 100 trials");
  const RngStream root = RngStream(seed).child("calibrate");
  std::vector<double> stats(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    RngStream trial = root.child(static_cast<std::uint64_t>(t));
    const SampleMatrix x = sample_null(cfg.d, cfg.n, family, trial);
    stats[static_cast<std::size_t>(t)] =
        evaluate_statistic(empirical_covariance(x), cfg, kind).statistic;
  }
  return empirical_quantile(std::move(stats), cfg.delta) - 1.0;
}

}  // namespace sparsepc
