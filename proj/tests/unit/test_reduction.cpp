#include <doctest.h>

#include <cmath>
#include <set>

#include "sparsepc/errors.hpp"
#include "sparsepc/experiment.hpp"
#include "sparsepc/reduction.hpp"
#include "sparsepc/samplers.hpp"
#include "sparsepc/statistics.hpp"

using namespace sparsepc;

namespace {

// Exact hypergeometric pmf by the multiplicative counting formula, an
// independent route from the lgamma-based production code.
double hyper_pmf_counting(int population, int successes, int draws, int x) {
  if (x < 0 || x > draws || x > successes || draws - x > population - successes) return 0.0;
  double value = 1.0;
  for (int i = 0; i < x; ++i) value *= static_cast<double>(successes - i) / (i + 1);
  for (int i = 0; i < draws - x; ++i) {
    value *= static_cast<double>(population - successes - i) / (i + 1);
  }
  for (int i = 0; i < draws; ++i) {
    value /= static_cast<double>(population - i) / (i + 1);
  }
  return value;
}

double binom_pmf_counting(int draws, double p, int x) {
  double value = 1.0;
  for (int i = 0; i < x; ++i) value *= static_cast<double>(draws - i) / (i + 1);
  return value * std::pow(p, x) * std::pow(1.0 - p, draws - x);
}

}  // namespace

TEST_CASE("derived exponents a = 2mu and b = 1 - (2-alpha)mu") {
  const ReductionParams p = select_clique_params(200, 32, 2, 1.0, 0.1, 0.1, 20.0, true);
  CHECK(p.a == doctest::Approx(0.2));
  CHECK(p.b == doctest::Approx(0.9));
}

TEST_CASE("parameter selection at desk scale: relaxed delta 20") {
  const ReductionParams p = select_clique_params(40, 16, 2, 1.0, 0.1, 0.1, 20.0, true);
  CHECK(p.m == 32);      // N n with N = ceil(40/20) = 2
  CHECK(p.kappa == 32);  // ceil(max(8, M ln 2) * 2 * 2) = 32
  CHECK(p.large_k_branch);
  CHECK(p.branch_constant == 2);
  const ParamTranscript t = validate_reduction_params(p);
  CHECK(t.coupling_ok());
  CHECK(t.theta_bar == doctest::Approx(0.5));          // (k-1) kappa / (2m)
  CHECK(t.branch_lower_bound == doctest::Approx(0.125));  // M k^2 / (4n)
  CHECK(t.realized_rate_constant == doctest::Approx(0.5 / std::sqrt(2.0 / 16.0)));
  CHECK_FALSE(t.regime_r0);  // desk scale sits outside R0; recorded, waived
}

TEST_CASE("parameter selection follows the large-k branch formulas") {
  // delta = 0.2 so N = 200; k=4, n=256, alpha=1. The smallest power of two
  // making the coupling checks pass is M = 4:
  //   kappa = ceil(4 ln(200) * 200 * 4) = 16955, m = 200*256 = 51200.
  const ReductionParams p = select_clique_params(60000, 256, 4, 1.0, 0.2, 0.003, 0.2, true);
  CHECK(p.large_k_branch);
  CHECK(p.branch_constant == 4);
  CHECK(p.m == 51200);
  CHECK(p.kappa == 16955);
  const ParamTranscript t = validate_reduction_params(p);
  CHECK(t.coupling_ok());
  // theta_bar >= M k^2/(4n) = 1/16
  CHECK(t.theta_bar == doctest::Approx(3.0 * 16955 / 102400.0));
  CHECK(t.theta_bar >= t.branch_lower_bound);
  // strict mode refuses: R0 membership fails at this scale
  CHECK_THROWS_AS(select_clique_params(60000, 256, 4, 1.0, 0.2, 0.003, 0.2, false), Infeasible);
}

TEST_CASE("returned parameters always re-validate across a small grid") {
  for (const int n : {16, 32, 64}) {
    for (const int k : {2, 3}) {
      if (n < 8 * k) continue;
      ReductionParams p;
      try {
        p = select_clique_params(20 * n + 10, n, k, 1.0, 0.1, 0.1, 10.0, true);
      } catch (const Infeasible&) {
        continue;  // infeasible cells are allowed; feasible ones must validate
      }
      const ParamTranscript t = validate_reduction_params(p);
      CHECK(t.coupling_ok());
      CHECK(t.theta_bar >= t.branch_lower_bound);
      CHECK(t.realized_rate_constant ==
            doctest::Approx(t.theta_bar / std::sqrt(std::pow(k, p.alpha) / n)));
    }
  }
}

TEST_CASE("infeasible selection names the failed conditions") {
  try {
    select_clique_params(20, 4, 2, 1.0, 0.1, 0.1, 20.0, true);
    FAIL("expected Infeasible");
  } catch (const Infeasible& e) {
    const std::string what = e.what();
    CHECK(what.find("failed") != std::string::npos);
  }
  CHECK_THROWS_AS(select_clique_params(40, 16, 1, 1.0, 0.1, 0.1, 20.0, true), InvalidArgument);
  CHECK_THROWS_AS(select_clique_params(40, 16, 2, 2.0, 0.1, 0.1, 20.0, true), InvalidArgument);
  CHECK_THROWS_AS(select_clique_params(40, 16, 2, 1.0, 0.5, 0.1, 20.0, true), InvalidArgument);
}

TEST_CASE("bottom-left output is a sign matrix and deterministic") {
  RngStream rng(71);
  const Graph g = sample_er_graph(40, rng);
  const SampleMatrix a = bottom_left(g, 25, 12, 555u);
  const SampleMatrix b = bottom_left(g, 25, 12, 555u);
  CHECK(a.d() == 25);
  CHECK(a.n() == 12);
  CHECK((a.columns - b.columns).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < a.d(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      REQUIRE((a.columns(i, j) == 1.0 || a.columns(i, j) == -1.0));
    }
  }
}

TEST_CASE("bottom-left preconditions") {
  RngStream rng(72);
  const Graph g_odd = sample_er_graph(7, rng);
  CHECK_THROWS_AS(bottom_left(g_odd, 10, 2, 1u), InvalidArgument);
  const Graph g = sample_er_graph(8, rng);
  CHECK_THROWS_AS(bottom_left(g, 10, 5, 1u), InvalidArgument);  // n > m
  CHECK_THROWS_AS(bottom_left(g, 4, 2, 1u), InvalidArgument);   // m >= d
}

TEST_CASE("bottom-left on Erdos-Renyi input gives balanced uncorrelated signs") {
  // Small-sample version of the exactness check (the full 1e5-entry version
  // runs in the acceptance suite): the output law is i.i.d. Rademacher.
  RngStream root(73);
  long long entries = 0;
  long long positives = 0;
  double row_pair = 0.0, col_pair = 0.0;
  long long pairs_row = 0, pairs_col = 0;
  const int datasets = 20;
  for (int t = 0; t < datasets; ++t) {
    RngStream graph_rng = root.child(t).child("g");
    const Graph g = sample_er_graph(64, graph_rng);
    RngStream bl_rng = root.child(t).child("bl");
    const SampleMatrix x = bottom_left(g, 40, 20, bl_rng);
    entries += x.d() * x.n();
    for (int i = 0; i < x.d(); ++i) {
      for (int j = 0; j < x.n(); ++j) {
        if (x.columns(i, j) > 0) ++positives;
        if (i + 1 < x.d()) {
          row_pair += x.columns(i, j) * x.columns(i + 1, j);
          ++pairs_row;
        }
        if (j + 1 < x.n()) {
          col_pair += x.columns(i, j) * x.columns(i, j + 1);
          ++pairs_col;
        }
      }
    }
  }
  const double n_entries = static_cast<double>(entries);
  CHECK(std::abs(positives - n_entries / 2) <= 3.0 * std::sqrt(n_entries / 4));
  CHECK(std::abs(row_pair / pairs_row) <= 3.0 / std::sqrt(static_cast<double>(pairs_row)));
  CHECK(std::abs(col_pair / pairs_col) <= 3.0 / std::sqrt(static_cast<double>(pairs_col)));
}

TEST_CASE("bottom-left on a complete graph: rows of original left vertices are constant") {
  // Hand-traceable scale m=2, n=1, d=3: every selection hits the clique, so
  // each column carries eta_i on every original-left coordinate.
  Graph k4(4);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) k4.set_edge(i, j, true);
  }
  std::vector<int> all{0, 1, 2, 3};
  k4.set_planted(all);
  for (int rep = 0; rep < 50; ++rep) {
    RngStream rng = RngStream(74).child(rep);
    BottomLeftTrace trace;
    const SampleMatrix x = bottom_left_traced(k4, 3, 1, rng, &trace);
    REQUIRE(trace.old_left_rows.size() == 2);
    const double first = x.columns(trace.old_left_rows[0], 0);
    CHECK(x.columns(trace.old_left_rows[1], 0) == first);
    CHECK(trace.signs.size() == 1);
    CHECK(first == trace.signs[0]);
    CHECK(trace.planted_cols.size() == 1);
    CHECK(trace.planted_rows.size() == 2);
  }
}

TEST_CASE("surrogate with kappa = 0 degenerates to pure Rademacher noise") {
  ReductionParams p;
  p.d = 12;
  p.n = 10;
  p.k = 2;
  p.m = 8;
  p.kappa = 0;
  RngStream rng(75);
  const SurrogateSample s = sample_surrogate(p, rng);
  CHECK(s.support_size == 0);
  for (const std::uint8_t e : s.elevated) CHECK(e == 0);
  for (int i = 0; i < s.x.d(); ++i) {
    for (int j = 0; j < s.x.n(); ++j) {
      REQUIRE((s.x.columns(i, j) == 1.0 || s.x.columns(i, j) == -1.0));
    }
  }
}

TEST_CASE("surrogate realizes E variance 1 + p(k-1) along its direction") {
  const ReductionParams p = select_clique_params(40, 16, 2, 1.0, 0.1, 0.1, 20.0, true);
  const double elevation = static_cast<double>(p.kappa) / (2.0 * p.m);  // 1/2
  const double expected = 1.0 + elevation * (p.k - 1);                  // 1.5
  RngStream root(76);
  double total = 0.0;
  double gap_corr = 0.0;
  const int datasets = 3000;
  for (int t = 0; t < datasets; ++t) {
    RngStream rng = root.child(static_cast<std::uint64_t>(t));
    const SurrogateSample s = sample_surrogate(p, rng);
    CHECK(s.support_size >= p.k);
    const Eigen::VectorXd z = s.direction.dense();
    const Eigen::VectorXd proj = s.x.columns.transpose() * z;
    total += proj.squaredNorm() / s.x.n();
    // consecutive columns are independent: products of centered squares
    gap_corr += (proj(0) * proj(0) - expected) * (proj(1) * proj(1) - expected);
  }
  CHECK(total / datasets == doctest::Approx(expected).epsilon(0.015));
  const double se = 3.0 / std::sqrt(static_cast<double>(datasets));
  CHECK(std::abs(gap_corr / datasets) <= 3.0 * se);
}

TEST_CASE("tv: single draw and degenerate populations are exactly coupled") {
  CHECK(hypergeom_binom_tv(32, 6, 1).exact_tv == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(hypergeom_binom_tv(20, 20, 7).exact_tv == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hypergeom_binom_tv(20, 0, 7).exact_tv == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("tv matches a brute-force pmf oracle and respects the 4n/N bound") {
  const TvResult r = hypergeom_binom_tv(32, 6, 8);
  CHECK(r.bound == doctest::Approx(1.0));
  double oracle = 0.0;
  for (int x = 0; x <= 8; ++x) {
    oracle += std::abs(hyper_pmf_counting(32, 6, 8, x) - binom_pmf_counting(8, 6.0 / 32.0, x));
  }
  oracle *= 0.5;
  CHECK(r.exact_tv == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(r.exact_tv <= r.bound);
  CHECK(r.exact_tv > 0.0);
}

TEST_CASE("tv micro-coupling at the lemma's scale 2m=12, n=3, kappa=6") {
  // Exact enumeration oracle: the planted-column count under bl is
  // Hypergeometric(12, 6, 3) (220 equally likely right-sets), while the
  // surrogate draws Binomial(3, 1/2) (8 sign patterns).
  double hyper[4], binom[4];
  for (int j = 0; j <= 3; ++j) {
    hyper[j] = hyper_pmf_counting(12, 6, 3, j);
    binom[j] = binom_pmf_counting(3, 0.5, j);
  }
  double tv = 0.0;
  for (int j = 0; j <= 3; ++j) tv += std::abs(hyper[j] - binom[j]);
  tv *= 0.5;
  const TvResult r = hypergeom_binom_tv(12, 6, 3);
  CHECK(r.exact_tv == doctest::Approx(tv).epsilon(1e-12));
  CHECK(r.exact_tv <= 8.0 * 3.0 / 6.0);  // aggregate bound 8n/m with m = 6
}

TEST_CASE("tv bound holds on a mini grid") {
  for (int population = 2; population <= 24; ++population) {
    for (int draws = 1; draws <= population / 2; ++draws) {
      for (int successes = 0; successes <= population; ++successes) {
        const TvResult r = hypergeom_binom_tv(population, successes, draws);
        CHECK(r.exact_tv <= r.bound + 1e-12);
      }
    }
  }
}

TEST_CASE("tv rejects out-of-range parameters") {
  CHECK_THROWS_AS(hypergeom_binom_tv(10, 11, 2), InvalidArgument);
  CHECK_THROWS_AS(hypergeom_binom_tv(10, 2, 11), InvalidArgument);
  CHECK_THROWS_AS(hypergeom_binom_tv(4000, 10, 2000), ResourceLimit);
}

TEST_CASE("pipeline is deterministic and separates planted from null") {
  const ReductionParams p = select_clique_params(40, 16, 2, 1.0, 0.1, 0.1, 20.0, true);
  RngStream a = RngStream(77).child(0);
  RngStream b = RngStream(77).child(0);
  const TestOutcome ta = reduction_pipeline(p, 0.05, true, StatisticKind::kSparseEig, a);
  const TestOutcome tb = reduction_pipeline(p, 0.05, true, StatisticKind::kSparseEig, b);
  CHECK(ta.statistic == tb.statistic);
  CHECK(ta.reject == tb.reject);

  std::vector<double> null_stats, planted_stats;
  for (int t = 0; t < 60; ++t) {
    RngStream s0 = RngStream(78).child(t).child("H0");
    RngStream s1 = RngStream(78).child(t).child("H1");
    null_stats.push_back(
        reduction_pipeline(p, 0.05, false, StatisticKind::kSparseEig, s0).statistic);
    planted_stats.push_back(
        reduction_pipeline(p, 0.05, true, StatisticKind::kSparseEig, s1).statistic);
  }
  const RankSumResult rs = rank_sum_greater(null_stats, planted_stats);
  CHECK(rs.p_value < 0.05);
}
