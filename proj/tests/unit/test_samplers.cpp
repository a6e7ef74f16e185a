#include <doctest.h>

#include <cmath>

#include "sparsepc/errors.hpp"
#include "sparsepc/samplers.hpp"
#include "sparsepc/statistics.hpp"

using namespace sparsepc;

namespace {

double empirical_variance_along(const SampleMatrix& x, const Eigen::VectorXd& u) {
  const Eigen::VectorXd proj = x.columns.transpose() * u;
  return proj.squaredNorm() / x.n();
}

}  // namespace

TEST_CASE("rademacher null has sign entries only") {
  const SampleMatrix x = sample_null(3, 5, NullFamily::kRademacher, 42u);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK((x.columns(i, j) == 1.0 || x.columns(i, j) == -1.0));
    }
  }
}

TEST_CASE("gaussian null is isotropic: empirical variance along e1") {
  const SampleMatrix x = sample_null(2, 100000, NullFamily::kGaussian, 7u);
  const double v = empirical_variance_along(x, Eigen::VectorXd::Unit(2, 0));
  CHECK(v > 0.98);  // CLT width 3 sqrt(2/n) ~ 0.0134
  CHECK(v < 1.02);
}

TEST_CASE("samplers are bit-identical for a fixed seed") {
  const SampleMatrix a = sample_null(4, 9, NullFamily::kGaussian, 123u);
  const SampleMatrix b = sample_null(4, 9, NullFamily::kGaussian, 123u);
  CHECK((a.columns - b.columns).cwiseAbs().maxCoeff() == 0.0);
  RngStream r1(55), r2(55);
  const Graph g1 = sample_er_graph(12, r1);
  const Graph g2 = sample_er_graph(12, r2);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) CHECK(g1.adjacent(i, j) == g2.adjacent(i, j));
  }
}

TEST_CASE("gaussian spike: variance 1+theta along v, 1 across") {
  const SparseDirection v = SparseDirection::uniform_on(5, {0});
  const SampleMatrix x = sample_spiked(5, 100000, v, 1.0, SpikedFamily::kGaussian, 11u);
  CHECK(empirical_variance_along(x, Eigen::VectorXd::Unit(5, 0)) == doctest::Approx(2.0).epsilon(0.03));
  CHECK(empirical_variance_along(x, Eigen::VectorXd::Unit(5, 1)) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("gaussian spike empirical covariance converges to I + theta v v^T") {
  const int d = 5, n = 100000;
  const double theta = 0.8;
  SparseDirection v;
  v.dim = d;
  v.support = {1, 3};
  v.values = {std::sqrt(0.5), -std::sqrt(0.5)};
  const SampleMatrix x = sample_spiked(d, n, v, theta, SpikedFamily::kGaussian, 2024u);
  const SymmetricMatrix sigma = empirical_covariance(x);
  const Eigen::VectorXd dense = v.dense();
  const Eigen::MatrixXd target =
      Eigen::MatrixXd::Identity(d, d) + theta * dense * dense.transpose();
  CHECK((sigma.dense() - target).cwiseAbs().maxCoeff() <= 4.0 / std::sqrt(n));
}

TEST_CASE("rademacher planted spike realizes E variance 1 + p(k-1)") {
  const int d = 9, k = 3, n = 50;
  const double p = 0.25;
  const double theta = p * (k - 1);  // 0.5
  const SparseDirection v = SparseDirection::uniform_on(d, {2, 4, 7});
  const Eigen::VectorXd dense = v.dense();
  RngStream rng(31);
  double total = 0.0;
  const int datasets = 2000;
  for (int t = 0; t < datasets; ++t) {
    RngStream trial = rng.child(static_cast<std::uint64_t>(t));
    const SampleMatrix x =
        sample_spiked(d, n, v, theta, SpikedFamily::kRademacherPlanted, trial);
    total += empirical_variance_along(x, dense);
  }
  CHECK(total / datasets == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("rademacher planted rejects theta above the elevation cap and non-uniform v") {
  const SparseDirection v = SparseDirection::uniform_on(6, {0, 1, 2});
  RngStream rng(1);
  CHECK_THROWS_AS(sample_spiked(6, 4, v, 1.2, SpikedFamily::kRademacherPlanted, rng),
                  InvalidArgument);  // p = 0.6 > 1/2
  SparseDirection skew;
  skew.dim = 6;
  skew.support = {0, 1};
  skew.values = {0.8, 0.6};
  CHECK_THROWS_AS(sample_spiked(6, 4, skew, 0.3, SpikedFamily::kRademacherPlanted, rng),
                  InvalidArgument);
}

TEST_CASE("zero spike degenerates to the null family") {
  const SparseDirection v = SparseDirection::uniform_on(4, {0, 2});
  const SampleMatrix x = sample_spiked(4, 2000, v, 0.0, SpikedFamily::kRademacherPlanted, 88u);
  for (int j = 0; j < x.n(); ++j) {
    for (int i = 0; i < 4; ++i) REQUIRE((x.columns(i, j) == 1.0 || x.columns(i, j) == -1.0));
  }
  CHECK(empirical_variance_along(x, v.dense()) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("er graph edge frequency for m=2") {
  int edges = 0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    if (sample_er_graph(2, static_cast<std::uint64_t>(s)).adjacent(0, 1)) ++edges;
  }
  CHECK(std::abs(edges / static_cast<double>(seeds) - 0.5) < 0.02);
}

TEST_CASE("er graph is symmetric with empty diagonal and binomial edge count") {
  const Graph g = sample_er_graph(100, 5u);
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(g.adjacent(i, i));
    for (int j = 0; j < 100; ++j) CHECK(g.adjacent(i, j) == g.adjacent(j, i));
  }
  const double pairs = 100.0 * 99.0 / 2.0;
  double total = 0.0;
  for (int s = 0; s < 20; ++s) {
    total += static_cast<double>(sample_er_graph(100, 1000u + s).edge_count());
  }
  // per-graph band from binomial moments, widened for the 20-graph average
  CHECK(std::abs(total / 20.0 - pairs / 2.0) <= 4.0 * std::sqrt(pairs / 4.0));
}

TEST_CASE("planted clique covers all pairs inside the clique") {
  const Graph g = sample_planted_clique(30, 10, 77u);
  REQUIRE(g.planted().has_value());
  CHECK(g.planted()->size() == 10);
  for (const int a : *g.planted()) {
    for (const int b : *g.planted()) {
      if (a != b) CHECK(g.adjacent(a, b));
    }
  }
}

TEST_CASE("planted clique with kappa = m is complete") {
  const Graph g = sample_planted_clique(8, 8, 3u);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (i != j) CHECK(g.adjacent(i, j));
    }
  }
}

TEST_CASE("planted clique degree split") {
  // planted vertex: 9 clique edges plus ~20/2 noise; others ~29/2
  double planted_mean = 0.0, other_mean = 0.0;
  const int graphs = 200;
  for (int s = 0; s < graphs; ++s) {
    const Graph g = sample_planted_clique(30, 10, 4000u + s);
    std::vector<bool> in(30, false);
    for (const int v : *g.planted()) in[v] = true;
    for (int v = 0; v < 30; ++v) {
      (in[v] ? planted_mean : other_mean) += g.degree(v);
    }
  }
  planted_mean /= graphs * 10.0;
  other_mean /= graphs * 20.0;
  CHECK(planted_mean == doctest::Approx(19.0).epsilon(0.03));
  CHECK(other_mean == doctest::Approx(14.5).epsilon(0.03));
}

TEST_CASE("planted clique parameter validation") {
  CHECK_THROWS_AS(sample_planted_clique(10, 1, 0u), InvalidArgument);
  CHECK_THROWS_AS(sample_planted_clique(10, 11, 0u), InvalidArgument);
}

TEST_CASE("spiked families satisfy the one-sided lower deviation bound") {
  // Frequency of V_n(v) - (1+theta) < -2 sqrt(2 theta k log(2/nu)/n) - 4 log(2/nu)/n
  // stays below nu plus Monte Carlo slack, for both families.
  const int d = 8, k = 4, n = 200;
  const double theta = 0.5;
  const SparseDirection v = SparseDirection::uniform_on(d, {0, 2, 5, 7});
  const Eigen::VectorXd dense = v.dense();
  const int trials = 10000;
  for (const SpikedFamily family :
       {SpikedFamily::kGaussian, SpikedFamily::kRademacherPlanted}) {
    RngStream rng(family == SpikedFamily::kGaussian ? 600u : 601u);
    std::vector<double> deviations(trials);
    for (int t = 0; t < trials; ++t) {
      RngStream trial = rng.child(static_cast<std::uint64_t>(t));
      const SampleMatrix x = sample_spiked(d, n, v, theta, family, trial);
      deviations[static_cast<std::size_t>(t)] =
          empirical_variance_along(x, dense) - (1.0 + theta);
    }
    for (const double nu : {0.1, 0.05}) {
      const double cut =
          -2.0 * std::sqrt(2.0 * theta * k * std::log(2.0 / nu) / n) - 4.0 * std::log(2.0 / nu) / n;
      int hits = 0;
      for (const double dev : deviations) {
        if (dev < cut) ++hits;
      }
      CHECK(static_cast<double>(hits) / trials <= nu + 3.0 * std::sqrt(nu / trials));
    }
  }
}

TEST_CASE("sample_subset and sample_permutation are uniform-ish and in range") {
  RngStream rng(9);
  const std::vector<int> subset = sample_subset(10, 4, rng);
  CHECK(subset.size() == 4);
  for (std::size_t i = 1; i < subset.size(); ++i) CHECK(subset[i] > subset[i - 1]);
  const std::vector<int> perm = sample_permutation(6, rng);
  std::vector<bool> seen(6, false);
  for (const int p : perm) {
    REQUIRE(p >= 0);
    REQUIRE(p < 6);
    CHECK_FALSE(seen[p]);
    seen[p] = true;
  }
}

TEST_CASE("hypergeometric sampler matches its mean") {
  RngStream rng(14);
  double total = 0.0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) total += sample_hypergeometric(40, 10, 12, rng);
  CHECK(total / reps == doctest::Approx(12.0 * 10.0 / 40.0).epsilon(0.02));
}
