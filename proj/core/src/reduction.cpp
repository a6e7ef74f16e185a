#include "sparsepc/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsepc/errors.hpp"
#include "sparsepc/samplers.hpp"

namespace sparsepc {
namespace {

constexpr double kBeta = 0.2;  // the coupling slack constant beta = 1/5
constexpr int kRejectionCap = 10'000;

double log_choose(double a, double b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

}  // namespace

std::string ParamTranscript::failures(bool relaxed) const {
  std::string out;
  auto add = [&out](bool ok, const char* name) {
    if (!ok) {
      if (!out.empty()) out += ", ";
      out += name;
    }
  };
  add(dims_ok, "dimension ordering (n <= m < d, k <= kappa <= m)");
  add(cond_a, "(a) m/n >= 8/(beta delta)");
  add(cond_b, "(b) n kappa / m >= 16 log(m/n)");
  add(cond_c, "(c) n kappa / m >= 8k");
  add(sandwich_lower, "sandwich (2m)^{a/2} <= Gamma kappa");
  add(sandwich_upper, "sandwich Gamma kappa <= (2m)^{b/2}");
  add(theta_bound, "theta_bar below branch lower bound");
  if (!relaxed) {
    add(regime_r0, "sparse regime R0 membership");
    add(regime_extra, "regime extras (k >= n^mu, n < d)");
  }
  return out.empty() ? "none" : out;
}

ParamTranscript validate_reduction_params(const ReductionParams& p) {
  ParamTranscript t;
  const double m = static_cast<double>(p.m);
  const double n = static_cast<double>(p.n);
  const double k = static_cast<double>(p.k);
  const double kappa = static_cast<double>(p.kappa);

  t.dims_ok = p.n >= 1 && p.n <= p.m && p.m < p.d && p.k >= 2 && p.k <= p.kappa &&
              p.kappa <= p.m;
  t.cond_a = m / n >= 8.0 / (kBeta * p.delta);
  t.cond_b = n * kappa / m >= 16.0 * std::log(m / n);
  t.cond_c = n * kappa / m >= 8.0 * k;
  const double gk = p.gamma_factor * kappa;
  t.sandwich_lower = std::pow(2.0 * m, p.a / 2.0) <= gk;
  t.sandwich_upper = gk <= std::pow(2.0 * m, p.b / 2.0);

  t.theta_bar = (k - 1.0) * kappa / (2.0 * m);
  const double rate = std::sqrt(std::pow(k, p.alpha) / n);
  t.realized_rate_constant = t.theta_bar / rate;
  if (p.large_k_branch) {
    t.branch_lower_bound = static_cast<double>(p.branch_constant) * k * k / (4.0 * n);
  } else {
    const double big_n = std::ceil(40.0 / p.delta);
    t.branch_lower_bound =
        rate / (8.0 * p.gamma_factor * std::pow(4.0 * big_n, p.b / 2.0));
  }
  t.theta_bound = t.theta_bar >= t.branch_lower_bound;

  DetectionConfig cfg;
  cfg.d = p.d;
  cfg.n = p.n;
  cfg.k = p.k;
  cfg.delta = std::min(p.delta, 0.33);
  t.regime_r0 = in_sparse_regime(cfg);
  t.regime_extra =
      k >= std::pow(n, p.mu) && p.n < p.d;
  return t;
}

ReductionParams select_clique_params(int d, int n, int k, double alpha, double mu,
                                     double gamma_factor, double delta, bool relaxed) {
  if (k < 2) throw InvalidArgument("select_clique_params: k must be >= 2");
  if (n < 1 || d <= n) throw InvalidArgument("select_clique_params: need 1 <= n < d");
  if (!(alpha >= 1.0 && alpha < 2.0)) {
    throw InvalidArgument("select_clique_params: alpha must lie in [1, 2)");
  }
  if (!(mu > 0.0 && mu < 1.0 / (4.0 - alpha))) {
    throw InvalidArgument("select_clique_params: mu must lie in (0, 1/(4-alpha))");
  }
  if (!(gamma_factor > 0.0)) throw InvalidArgument("select_clique_params: Gamma must be positive");
  if (!(delta > 0.0) || (!relaxed && delta >= 1.0 / 3.0)) {
    throw InvalidArgument("select_clique_params: delta out of range (use relaxed mode to widen)");
  }

  const double a = 2.0 * mu;
  const double b = 1.0 - (2.0 - alpha) * mu;
  const long long big_n = static_cast<long long>(std::ceil(40.0 / delta));
  const double split = std::pow(static_cast<double>(n), 1.0 / (4.0 - alpha));

  ParamTranscript best_transcript;
  ReductionParams best_params;
  int best_failures = std::numeric_limits<int>::max();

  for (long long m_const = 1; m_const <= (1ll << 24); m_const *= 2) {
    ReductionParams p;
    p.d = d;
    p.n = n;
    p.k = k;
    p.alpha = alpha;
    p.mu = mu;
    p.gamma_factor = gamma_factor;
    p.delta = delta;
    p.a = a;
    p.b = b;
    p.relaxed = relaxed;
    p.branch_constant = m_const;
    p.large_k_branch = static_cast<double>(k) >= split / static_cast<double>(m_const);

    if (p.large_k_branch) {
      p.m = big_n * n;
      p.kappa = static_cast<long long>(
          std::ceil(std::max(8.0, m_const * std::log(static_cast<double>(big_n))) * big_n * k));
    } else {
      const double m_cap =
          2.0 * big_n * std::pow(n * std::pow(static_cast<double>(k), 2.0 - alpha), 1.0 / (2.0 - b));
      p.m = static_cast<long long>(std::floor(m_cap));
      if (p.m < 2) continue;
      p.kappa = static_cast<long long>(
          std::floor(std::pow(2.0 * static_cast<double>(p.m), b / 2.0) / gamma_factor));
      if (p.kappa < 2) continue;
    }

    const ParamTranscript t = validate_reduction_params(p);
    if (t.accepted(relaxed)) {
      return p;
    }
    const int failures = static_cast<int>(!t.dims_ok) + static_cast<int>(!t.cond_a) +
                         static_cast<int>(!t.cond_b) + static_cast<int>(!t.cond_c) +
                         static_cast<int>(!t.sandwich_lower) + static_cast<int>(!t.sandwich_upper) +
                         static_cast<int>(!t.theta_bound) +
                         (relaxed ? 0 : static_cast<int>(!t.regime_r0) + static_cast<int>(!t.regime_extra));
    if (failures < best_failures) {
      best_failures = failures;
      best_transcript = t;
      best_params = p;
    }
  }

  throw Infeasible("select_clique_params: no (m, kappa) satisfies the constraints at this scale; "
                   "closest attempt (m=" + std::to_string(best_params.m) +
                   ", kappa=" + std::to_string(best_params.kappa) +
                   ", M=" + std::to_string(best_params.branch_constant) +
                   ") failed: " + best_transcript.failures(relaxed));
}

SampleMatrix bottom_left_traced(const Graph& g, int d, int n, RngStream& rng,
                                BottomLeftTrace* trace) {
  const int total = g.vertex_count();
  if (total % 2 != 0) throw InvalidArgument("bottom_left: graph must have an even vertex count");
  const int m = total / 2;
  if (!(n >= 1 && n <= m && m < d)) {
    throw InvalidArgument("bottom_left: need 1 <= n <= m < d");
  }

  // Draw order is part of the determinism contract: right vertices, left
  // vertices, fresh-row bits, left labels, right labels, column signs.
  const std::vector<int> rights = sample_subset(total, n, rng);
  std::vector<bool> taken(total, false);
  for (const int v : rights) taken[v] = true;
  std::vector<int> rest;
  rest.reserve(total - n);
  for (int v = 0; v < total; ++v) {
    if (!taken[v]) rest.push_back(v);
  }
  const std::vector<int> left_picks = sample_subset(total - n, m, rng);
  std::vector<int> lefts(m);
  for (int i = 0; i < m; ++i) lefts[i] = rest[left_picks[i]];

  Eigen::MatrixXd bits(d, n);  // pre-relabel bipartite adjacency
  for (int l = 0; l < m; ++l) {
    for (int j = 0; j < n; ++j) {
      bits(l, j) = g.adjacent(lefts[l], rights[j]) ? 1.0 : 0.0;
    }
  }
  for (int l = m; l < d; ++l) {
    for (int j = 0; j < n; ++j) {
      bits(l, j) = rng.next_bernoulli(0.5) ? 1.0 : 0.0;
    }
  }

  const std::vector<int> row_label = sample_permutation(d, rng);
  const std::vector<int> col_label = sample_permutation(n, rng);
  std::vector<double> signs(n);
  for (int c = 0; c < n; ++c) signs[c] = rng.next_sign();

  SampleMatrix x;
  x.columns.resize(d, n);
  for (int l = 0; l < d; ++l) {
    for (int j = 0; j < n; ++j) {
      x.columns(row_label[l], col_label[j]) = signs[col_label[j]] * (2.0 * bits(l, j) - 1.0);
    }
  }

  if (trace != nullptr) {
    trace->old_left_rows.clear();
    trace->planted_rows.clear();
    trace->planted_cols.clear();
    for (int l = 0; l < m; ++l) trace->old_left_rows.push_back(row_label[l]);
    if (g.planted()) {
      std::vector<bool> in_clique(total, false);
      for (const int v : *g.planted()) in_clique[v] = true;
      for (int l = 0; l < m; ++l) {
        if (in_clique[lefts[l]]) trace->planted_rows.push_back(row_label[l]);
      }
      for (int j = 0; j < n; ++j) {
        if (in_clique[rights[j]]) trace->planted_cols.push_back(col_label[j]);
      }
    }
    trace->signs = signs;
  }
  return x;
}

SampleMatrix bottom_left(const Graph& g, int d, int n, RngStream& rng) {
  return bottom_left_traced(g, d, n, rng, nullptr);
}

SampleMatrix bottom_left(const Graph& g, int d, int n, std::uint64_t seed) {
  RngStream rng = RngStream(seed).child("bottom_left");
  return bottom_left_traced(g, d, n, rng, nullptr);
}

SurrogateSample sample_surrogate(const ReductionParams& params, RngStream& rng) {
  const int d = params.d;
  const int n = params.n;
  const int k = params.k;
  if (d < 1 || n < 1 || k < 1 || k > d) {
    throw InvalidArgument("sample_surrogate: invalid dimensions");
  }
  if (params.m < 1 || params.kappa < 0 || params.kappa > params.m || params.n > params.m ||
      params.m >= params.d) {
    throw InvalidArgument("sample_surrogate: invalid (m, kappa)");
  }
  const double p_elev =
      params.kappa > 0 ? static_cast<double>(params.kappa) / (2.0 * params.m) : 0.0;

  SurrogateSample out;
  out.elevated.resize(n);
  for (int i = 0; i < n; ++i) out.elevated[i] = rng.next_bernoulli(p_elev) ? 1 : 0;

  std::vector<bool> on_gamma(d, false);
  if (params.kappa > 0) {
    int elevated_count = 0;
    for (const std::uint8_t e : out.elevated) elevated_count += e;
    const int population = static_cast<int>(2 * params.m) - n;
    int support_size = -1;
    for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
      const int available = static_cast<int>(params.kappa) - elevated_count;
      const int t = available > 0
                        ? sample_hypergeometric(population, available,
                                                static_cast<int>(params.m), rng)
                        : 0;
      if (t >= k) {
        support_size = t;
        break;
      }
    }
    if (support_size < 0) {
      throw ResourceLimit("sample_surrogate: rejection cap exhausted while drawing the "
                          "conditional row support");
    }
    out.support_size = std::min(support_size, d);
    const std::vector<int> gamma = sample_subset(d, out.support_size, rng);
    for (const int idx : gamma) on_gamma[idx] = true;
    out.direction =
        SparseDirection::uniform_on(d, std::vector<int>(gamma.begin(), gamma.begin() + k));
  } else {
    // Degenerate kappa = 0: pure Rademacher null; the direction is unused.
    std::vector<int> lead(k);
    for (int i = 0; i < k; ++i) lead[i] = i;
    out.direction = SparseDirection::uniform_on(d, std::move(lead));
  }

  out.x.columns.resize(d, n);
  for (int i = 0; i < n; ++i) {
    const double eta = rng.next_sign();
    if (out.elevated[i]) {
      for (int j = 0; j < d; ++j) {
        out.x.columns(j, i) = on_gamma[j] ? eta : rng.next_sign();
      }
    } else {
      for (int j = 0; j < d; ++j) out.x.columns(j, i) = rng.next_sign();
    }
  }
  return out;
}

TvResult hypergeom_binom_tv(int population, int successes, int draws) {
  if (population < 1 || successes < 0 || successes > population || draws < 1 ||
      draws > population) {
    throw InvalidArgument("hypergeom_binom_tv: parameters out of range");
  }
  if (draws > 1000) {
    throw ResourceLimit("hypergeom_binom_tv: draws > 1000 exceeds the exact-pmf range");
  }
  const double nn = static_cast<double>(population);
  const double kk = static_cast<double>(successes);
  const double dd = static_cast<double>(draws);
  const double p = kk / nn;

  const int lo = std::max(0, draws - (population - successes));
  const int hi = std::min(draws, successes);
  const double log_denominator = log_choose(nn, dd);

  double distance = 0.0;
  for (int x = 0; x <= draws; ++x) {
    double hyper = 0.0;
    if (x >= lo && x <= hi) {
      hyper = std::exp(log_choose(kk, x) + log_choose(nn - kk, dd - x) - log_denominator);
    }
    double binom = 0.0;
    if (p == 0.0) {
      binom = x == 0 ? 1.0 : 0.0;
    } else if (p == 1.0) {
      binom = x == draws ? 1.0 : 0.0;
    } else {
      binom = std::exp(log_choose(dd, x) + x * std::log(p) + (dd - x) * std::log1p(-p));
    }
    distance += std::abs(hyper - binom);
  }

  TvResult result;
  result.exact_tv = 0.5 * distance;
  result.bound = 4.0 * dd / nn;
  return result;
}

TestOutcome reduction_pipeline(const ReductionParams& params, double delta, bool planted,
                               StatisticKind kind, RngStream& rng) {
  const int total = static_cast<int>(2 * params.m);
  RngStream graph_rng = rng.child("graph");
  const Graph g = planted
                      ? sample_planted_clique(total, static_cast<int>(params.kappa), graph_rng)
                      : sample_er_graph(total, graph_rng);
  RngStream bl_rng = rng.child("bl");
  const SampleMatrix x = bottom_left(g, params.d, params.n, bl_rng);
  DetectionConfig cfg;
  cfg.d = params.d;
  cfg.n = params.n;
  cfg.k = params.k;
  cfg.delta = delta;
  return run_test(x, cfg, kind);
}

}  // namespace sparsepc
