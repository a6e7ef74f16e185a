#include "sparsepc/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "sparsepc/errors.hpp"

namespace sparsepc {
namespace {

void check_dims(int d, int n) {
  if (d < 1 || n < 1) throw InvalidArgument("sampler: d and n must be >= 1");
}

}  // namespace

SparseDirection SparseDirection::uniform_on(int dim, std::vector<int> support) {
  SparseDirection v;
  v.dim = dim;
  v.values.assign(support.size(), 1.0 / std::sqrt(static_cast<double>(support.size())));
  v.support = std::move(support);
  v.validate();
  return v;
}

Eigen::VectorXd SparseDirection::dense() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < support.size(); ++i) out(support[i]) = values[i];
  return out;
}

void SparseDirection::validate() const {
  if (dim < 1 || support.empty() || support.size() != values.size()) {
    throw InvalidArgument("SparseDirection: empty or mismatched support/values");
  }
  if (static_cast<int>(support.size()) > dim) {
    throw InvalidArgument("SparseDirection: support larger than dimension");
  }
  int prev = -1;
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] <= prev || support[i] >= dim) {
      throw InvalidArgument("SparseDirection: support must be sorted and within [0, dim)");
    }
    prev = support[i];
    norm_sq += values[i] * values[i];
  }
  if (std::abs(norm_sq - 1.0) > 1e-12) {
    throw InvalidArgument("SparseDirection: values must have unit Euclidean norm");
  }
}

SampleMatrix sample_null(int d, int n, NullFamily family, RngStream& rng) {
  check_dims(d, n);
  SampleMatrix x;
  x.columns.resize(d, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < d; ++i) {
      x.columns(i, j) = family == NullFamily::kGaussian ? rng.next_gaussian() : rng.next_sign();
    }
  }
  return x;
}

SampleMatrix sample_null(int d, int n, NullFamily family, std::uint64_t seed) {
  RngStream rng = RngStream(seed).child("sample_null");
  return sample_null(d, n, family, rng);
}

SampleMatrix sample_spiked(int d, int n, const SparseDirection& v, double theta,
                           SpikedFamily family, RngStream& rng) {
  check_dims(d, n);
  v.validate();
  if (v.dim != d) throw InvalidArgument("sample_spiked: direction dimension mismatch");
  if (theta < 0.0) throw InvalidArgument("sample_spiked: theta must be nonnegative");

  if (family == SpikedFamily::kGaussian) {
    SampleMatrix x = sample_null(d, n, NullFamily::kGaussian, rng);
    if (theta > 0.0) {
      const double scale = std::sqrt(1.0 + theta) - 1.0;
      for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < v.support.size(); ++i) {
          dot += v.values[i] * x.columns(v.support[i], j);
        }
        for (std::size_t i = 0; i < v.support.size(); ++i) {
          x.columns(v.support[i], j) += scale * dot * v.values[i];
        }
      }
    }
    return x;
  }

  // Rademacher-planted mixture.
  const int k = v.k();
  if (k < 2) throw InvalidArgument("sample_spiked: rademacher_planted needs k >= 2");
  const double expected = 1.0 / std::sqrt(static_cast<double>(k));
  for (const double value : v.values) {
    if (std::abs(value - expected) > 1e-12) {
      throw InvalidArgument("sample_spiked: rademacher_planted requires v uniform on its support");
    }
  }
  const double p = theta / static_cast<double>(k - 1);
  if (p > 0.5) {
    throw InvalidArgument("sample_spiked: theta/(k-1) exceeds 1/2, not a valid elevation probability");
  }
  SampleMatrix x;
  x.columns.resize(d, n);
  std::vector<bool> on_support(d, false);
  for (const int idx : v.support) on_support[idx] = true;
  for (int j = 0; j < n; ++j) {
    const bool planted = rng.next_bernoulli(p);
    const double eta = rng.next_sign();
    for (int i = 0; i < d; ++i) {
      x.columns(i, j) = planted && on_support[i] ? eta : rng.next_sign();
    }
  }
  return x;
}

SampleMatrix sample_spiked(int d, int n, const SparseDirection& v, double theta,
                           SpikedFamily family, std::uint64_t seed) {
  RngStream rng = RngStream(seed).child("sample_spiked");
  return sample_spiked(d, n, v, theta, family, rng);
}

Graph sample_er_graph(int m, RngStream& rng) {
  if (m < 2) throw InvalidArgument("sample_er_graph: m must be >= 2");
  Graph g(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (rng.next_bernoulli(0.5)) g.set_edge(i, j, true);
    }
  }
  return g;
}

Graph sample_er_graph(int m, std::uint64_t seed) {
  RngStream rng = RngStream(seed).child("sample_er_graph");
  return sample_er_graph(m, rng);
}

Graph sample_planted_clique(int m, int kappa, RngStream& rng) {
  if (m < 2) throw InvalidArgument("sample_planted_clique: m must be >= 2");
  if (kappa < 2 || kappa > m) {
    throw InvalidArgument("sample_planted_clique: kappa must satisfy 2 <= kappa <= m");
  }
  std::vector<int> clique = sample_subset(m, kappa, rng);
  std::vector<bool> in_clique(m, false);
  for (const int v : clique) in_clique[v] = true;
  Graph g(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (in_clique[i] && in_clique[j]) {
        g.set_edge(i, j, true);
      } else if (rng.next_bernoulli(0.5)) {
        g.set_edge(i, j, true);
      }
    }
  }
  g.set_planted(std::move(clique));
  return g;
}

Graph sample_planted_clique(int m, int kappa, std::uint64_t seed) {
  RngStream rng = RngStream(seed).child("sample_planted_clique");
  return sample_planted_clique(m, kappa, rng);
}

std::vector<int> sample_subset(int population, int k, RngStream& rng) {
  if (k < 0 || k > population) throw InvalidArgument("sample_subset: k out of range");
  std::vector<int> pool(population);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(population - i)));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> sample_permutation(int size, RngStream& rng) {
  std::vector<int> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i + 1 < size; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(size - i)));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

int sample_hypergeometric(int population, int successes, int draws, RngStream& rng) {
  if (draws < 0 || draws > population || successes < 0 || successes > population) {
    throw InvalidArgument("sample_hypergeometric: parameters out of range");
  }
  int hits = 0;
  int remaining_successes = successes;
  int remaining = population;
  for (int t = 0; t < draws; ++t) {
    const double p = remaining > 0 ? static_cast<double>(remaining_successes) / remaining : 0.0;
    if (rng.next_bernoulli(p)) {
      ++hits;
      --remaining_successes;
    }
    --remaining;
  }
  return hits;
}

}  // namespace sparsepc
