#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsepc/detection.hpp"
#include "sparsepc/graph.hpp"
#include "sparsepc/rng.hpp"
#include "sparsepc/sample_matrix.hpp"

namespace sparsepc {

/// Parameter set tying a sparse-PC detection instance (d, n, k) to a
/// planted-clique instance on 2m vertices with clique size kappa, plus the
/// exponents of the rate being targeted: a = 2 mu, b = 1 - (2 - alpha) mu.
struct ReductionParams {
  int d = 0;
  int n = 0;
  int k = 0;
  long long m = 0;
  long long kappa = 0;
  double alpha = 1.0;
  double mu = 0.1;
  double gamma_factor = 1.0;  // the Gamma in (2m)^{a/2} <= Gamma kappa <= (2m)^{b/2}
  double delta = 0.05;        // confidence level used by the selection rules
  double a = 0.0;
  double b = 0.0;
  bool relaxed = false;            // regime membership waived during selection
  bool large_k_branch = false;     // which selection branch produced (m, kappa)
  long long branch_constant = 1;   // the power-of-two constant M realized
};

/// Re-validation transcript for a ReductionParams: the coupling conditions
/// (a) m/n >= 8/(beta delta), (b) n kappa / m >= 16 log(m/n),
/// (c) n kappa / m >= 8k with beta = 1/5, the exponent sandwich, dimension
/// ordering, signal lower bound, and regime membership.
struct ParamTranscript {
  bool dims_ok = false;
  bool cond_a = false;
  bool cond_b = false;
  bool cond_c = false;
  bool sandwich_lower = false;
  bool sandwich_upper = false;
  bool theta_bound = false;
  bool regime_r0 = false;
  bool regime_extra = false;  // k >= n^mu and n < d
  double theta_bar = 0.0;
  double branch_lower_bound = 0.0;
  double realized_rate_constant = 0.0;  // theta_bar / sqrt(k^alpha / n)

  /// Conditions that must hold regardless of regime relaxation.
  bool coupling_ok() const {
    return dims_ok && cond_a && cond_b && cond_c && sandwich_lower && sandwich_upper &&
           theta_bound;
  }
  bool accepted(bool relaxed) const {
    return coupling_ok() && (relaxed || (regime_r0 && regime_extra));
  }
  /// Comma-separated names of failed conditions, for structured errors.
  std::string failures(bool relaxed) const;
};

ParamTranscript validate_reduction_params(const ReductionParams& params);

/// Pick (m, kappa) for the given detection instance following the two-branch
/// rule: with N = ceil(40/delta) and M the smallest power of two making all
/// checks pass, the large-k branch takes kappa = ceil(max(8, M log N) N k),
/// m = N n, and the small-k branch the largest integers with
/// m <= 2N (n k^{2-alpha})^{1/(2-b)} and Gamma kappa <= (2m)^{b/2}.
/// In relaxed mode the sparse-regime membership of (d, n, k) is waived (and
/// recorded on the result); the coupling conditions are always enforced.
/// Throws Infeasible naming the failed conditions when no choice works.
ReductionParams select_clique_params(int d, int n, int k, double alpha, double mu,
                                     double gamma_factor, double delta, bool relaxed = false);

/// The bottom-left transformation of a graph on 2m vertices into a d x n
/// sign matrix: keep the bipartite edges between n random right vertices and
/// m random left vertices, append d - m fresh Bernoulli(1/2) left rows,
/// relabel both sides by uniform permutations, and emit columns
/// X_i = eta_i (2 B_i - 1) with independent Rademacher eta_i.
/// Requires vertex_count even, n <= m < d.
SampleMatrix bottom_left(const Graph& g, int d, int n, RngStream& rng);
SampleMatrix bottom_left(const Graph& g, int d, int n, std::uint64_t seed);

/// Construction bookkeeping for verification: which rows carry original
/// left vertices, which rows/columns carry planted ones, and the column signs.
struct BottomLeftTrace {
  std::vector<int> old_left_rows;
  std::vector<int> planted_rows;
  std::vector<int> planted_cols;
  std::vector<double> signs;
};
SampleMatrix bottom_left_traced(const Graph& g, int d, int n, RngStream& rng,
                                BottomLeftTrace* trace);

/// One dataset from the i.i.d. surrogate distribution of the coupling
/// argument: elevation indicators eps_i ~ Bernoulli(kappa/(2m)), a row
/// support gamma drawn once per dataset from the hypergeometric left-overlap
/// law conditioned on size >= k (rejection sampling, cap 10^4), and columns
/// that are pure Rademacher when eps_i = 0 or carry a common sign on gamma
/// when eps_i = 1. `direction` is the embedded unit vector on the first k
/// active coordinates.
struct SurrogateSample {
  SampleMatrix x;
  SparseDirection direction;
  std::vector<std::uint8_t> elevated;
  int support_size = 0;
};
SurrogateSample sample_surrogate(const ReductionParams& params, RngStream& rng);

/// Exact total variation between Hypergeometric(population, successes, draws)
/// and Binomial(draws, successes/population), with the 4 draws / population
/// comparison bound. Exact pmfs are computed in log space.
struct TvResult {
  double exact_tv = 0.0;
  double bound = 0.0;
};
TvResult hypergeom_binom_tv(int population, int successes, int draws);

/// Composition xi = psi o bl: sample a planted-clique (or Erdos-Renyi) graph
/// on 2m vertices, transform, and run the detection test.
TestOutcome reduction_pipeline(const ReductionParams& params, double delta, bool planted,
                               StatisticKind kind, RngStream& rng);

}  // namespace sparsepc
