#pragma once

#include <cstdint>
#include <vector>

#include "sparsepc/graph.hpp"
#include "sparsepc/rng.hpp"
#include "sparsepc/sample_matrix.hpp"

namespace sparsepc {

enum class NullFamily { kGaussian, kRademacher };
enum class SpikedFamily { kGaussian, kRademacherPlanted };

/// n i.i.d. isotropic columns: standard normal or Rademacher entries.
SampleMatrix sample_null(int d, int n, NullFamily family, RngStream& rng);
SampleMatrix sample_null(int d, int n, NullFamily family, std::uint64_t seed);

/// n i.i.d. columns with variance 1 + theta along the k-sparse direction v.
///
/// Gaussian: exact N(0, I + theta v v^T) via the rank-one update
/// X = W + (sqrt(1+theta) - 1) (v^T W) v of a standard normal W.
///
/// Rademacher-planted: the sign-mixture with elevation probability
/// p = theta / (k - 1); v must be uniform on its support and p <= 1/2.
/// A column is a planted pattern (common sign on supp(v), Rademacher
/// elsewhere) with probability p, otherwise pure Rademacher noise.
///
/// theta == 0 degenerates to the matching null family in both cases.
SampleMatrix sample_spiked(int d, int n, const SparseDirection& v, double theta,
                           SpikedFamily family, RngStream& rng);
SampleMatrix sample_spiked(int d, int n, const SparseDirection& v, double theta,
                           SpikedFamily family, std::uint64_t seed);

/// Erdos-Renyi G(m, 1/2).
Graph sample_er_graph(int m, RngStream& rng);
Graph sample_er_graph(int m, std::uint64_t seed);

/// G(m, 1/2, kappa): a uniformly random kappa-clique, all other pairs
/// independent Bernoulli(1/2); the planted set is recorded on the graph.
Graph sample_planted_clique(int m, int kappa, RngStream& rng);
Graph sample_planted_clique(int m, int kappa, std::uint64_t seed);

/// Uniform random k-subset of {0,...,population-1}, returned sorted.
std::vector<int> sample_subset(int population, int k, RngStream& rng);

/// Uniform random permutation of {0,...,size-1}.
std::vector<int> sample_permutation(int size, RngStream& rng);

/// Hypergeometric draw: successes among `draws` taken without replacement
/// from a population with `successes` marked items.
int sample_hypergeometric(int population, int successes, int draws, RngStream& rng);

}  // namespace sparsepc
