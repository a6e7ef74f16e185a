#pragma once

#include <cstdint>

#include "sparsepc/sample_matrix.hpp"
#include "sparsepc/symmetric_matrix.hpp"

namespace sparsepc {

inline constexpr std::uint64_t kDefaultSupportBudget = 10'000'000;

/// Empirical second-moment matrix (1/n) sum_i X_i X_i^T. No mean centering:
/// the model is centered by assumption.
SymmetricMatrix empirical_covariance(const SampleMatrix& x);

struct SparseEigResult {
  double value = 0.0;
  SparseDirection direction;
};

/// Exact k-sparse eigenvalue: max over all size-k supports S of the top
/// eigenvalue of A_S, with the maximizing unit vector embedded in R^d.
/// Supports are scanned in lexicographic order and ties keep the first
/// (lexicographically smallest) support. A Gershgorin upper bound per
/// support skips submatrices that cannot beat the running maximum.
///
/// Throws ResourceLimit when C(d, k) exceeds `budget` rather than silently
/// approximating.
SparseEigResult sparse_eigmax(const SymmetricMatrix& a, int k,
                              std::uint64_t budget = kDefaultSupportBudget);

/// Number of size-k supports C(d, k), saturating at 2^63-1.
std::uint64_t support_count(int d, int k);

/// Dual certificate value max_i |A_ii| + k max_{i != j} |A_ij|: the
/// feasible dual point that drops all off-diagonal mass. Upper-bounds the
/// k-sparse SDP relaxation for positive semidefinite A.
double dual_bound(const SymmetricMatrix& a, int k);

}  // namespace sparsepc
