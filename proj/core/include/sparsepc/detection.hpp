#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sparsepc/sample_matrix.hpp"
#include "sparsepc/samplers.hpp"
#include "sparsepc/statistics.hpp"

namespace sparsepc {

enum class StatisticKind { kSparseEig, kSdp, kDual };

std::string to_string(StatisticKind kind);
StatisticKind statistic_kind_from_string(const std::string& name);

struct DetectionConfig {
  int d = 0;
  int n = 0;
  int k = 0;
  double delta = 0.05;   // confidence level, must lie in (0, 1/3)
  double theta = 0.0;    // signal strength (>= 0), used by experiments
  std::optional<double> mu;  // regime exponent for the k >= n^mu check

  void validate() const;
};

/// Membership in the sparse regime: 15 sqrt(k log(6ed/delta)/n) <= 1 and
/// k <= d^0.49; when mu is set, additionally k >= n^mu and n < d.
bool in_sparse_regime(const DetectionConfig& cfg);

/// tau = 8 sqrt(k log(6ed/(k delta)) / n).
double threshold_sparse_eig(const DetectionConfig& cfg);

/// tau = 16 sqrt(k^2 log(4d^2/delta) / n) + 1/sqrt(n).
double threshold_sdp(const DetectionConfig& cfg);

struct TestOutcome {
  double statistic = 0.0;
  double threshold = 0.0;  // rejection cutoff on the statistic scale (1 + tau)
  bool reject = false;
  StatisticKind kind = StatisticKind::kSparseEig;
  double precision = 0.0;  // solver accuracy used; 0 for exact statistics
  int iterations = 0;      // solver diagnostics; 0 for exact statistics
};

/// Evaluate the chosen statistic on the empirical covariance of X and
/// compare strictly against 1 + tau. The SDP statistic runs at precision
/// 1/sqrt(n); the dual statistic reuses the SDP threshold (it upper-bounds
/// the SDP value, so it is reported for comparison only).
TestOutcome run_test(const SampleMatrix& x, const DetectionConfig& cfg, StatisticKind kind,
                     std::uint64_t budget = kDefaultSupportBudget);

/// Statistic value alone (same dispatch as run_test) on a covariance that
/// has already been computed.
TestOutcome evaluate_statistic(const SymmetricMatrix& sigma, const DetectionConfig& cfg,
                               StatisticKind kind, std::uint64_t budget = kDefaultSupportBudget);

/// Empirical (1-delta)-quantile of the chosen statistic minus 1, over
/// `trials` null datasets drawn from per-trial child streams of `seed`.
double calibrate_threshold(const DetectionConfig& cfg, StatisticKind kind, int trials,
                           std::uint64_t seed, NullFamily family = NullFamily::kRademacher);

/// Order statistic at ceil((1 - delta) * count) of the sorted sample.
double empirical_quantile(std::vector<double> values, double delta);

}  // namespace sparsepc
