#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sparsepc/rng.hpp"
#include "sparsepc/symmetric_matrix.hpp"

namespace test_support {

inline Eigen::MatrixXd random_gaussian(sparsepc::RngStream& rng, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
  }
  return m;
}

inline sparsepc::SymmetricMatrix random_symmetric(sparsepc::RngStream& rng, int d) {
  const Eigen::MatrixXd g = random_gaussian(rng, d, d);
  return sparsepc::SymmetricMatrix((0.5 * (g + g.transpose())).eval());
}

inline sparsepc::SymmetricMatrix random_psd(sparsepc::RngStream& rng, int d) {
  const Eigen::MatrixXd g = random_gaussian(rng, d, d);
  return sparsepc::SymmetricMatrix(((g * g.transpose()) / d).eval());
}

inline void next_combination_or_end(std::vector<int>& support, int d, bool& done) {
  const int k = static_cast<int>(support.size());
  int pos = k - 1;
  while (pos >= 0 && support[pos] == d - k + pos) --pos;
  if (pos < 0) {
    done = true;
    return;
  }
  ++support[pos];
  for (int i = pos + 1; i < k; ++i) support[i] = support[i - 1] + 1;
}

/// Independent route for the k-sparse eigenvalue: per-support top eigenvalue
/// via Eigen's solver, plain scan, no pruning.
inline double oracle_sparse_eig(const sparsepc::SymmetricMatrix& a, int k) {
  const int d = a.dim();
  std::vector<int> support(k);
  for (int i = 0; i < k; ++i) support[i] = i;
  double best = -1e300;
  bool done = false;
  while (!done) {
    Eigen::MatrixXd sub(k, k);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) sub(r, c) = a(support[r], support[c]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub, Eigen::EigenvaluesOnly);
    best = std::max(best, eig.eigenvalues()(k - 1));
    next_combination_or_end(support, d, done);
  }
  return best;
}

/// Second independent oracle: exhaustive maximization of u^T A u over a fine
/// grid of unit vectors per support (k <= 3). Never exceeds the true max;
/// falls short by at most O(grid step^2) times the spectral spread.
inline double oracle_sparse_eig_grid(const sparsepc::SymmetricMatrix& a, int k) {
  const int d = a.dim();
  std::vector<int> support(k);
  for (int i = 0; i < k; ++i) support[i] = i;
  double best = -1e300;
  bool done = false;
  const double pi = 3.14159265358979323846;
  while (!done) {
    if (k == 1) {
      best = std::max(best, a(support[0], support[0]));
    } else if (k == 2) {
      const int i = support[0], j = support[1];
      const int steps = 2000;
      for (int t = 0; t < steps; ++t) {
        const double ang = pi * t / steps;
        const double c = std::cos(ang), s = std::sin(ang);
        best = std::max(best, c * c * a(i, i) + 2 * c * s * a(i, j) + s * s * a(j, j));
      }
    } else {
      const int i = support[0], j = support[1], l = support[2];
      const int pol = 180, az = 360;
      for (int t = 0; t < pol; ++t) {
        const double phi = pi * t / pol;
        const double cp = std::cos(phi), sp = std::sin(phi);
        for (int q = 0; q < az; ++q) {
          const double lam = 2 * pi * q / az;
          const double x = sp * std::cos(lam), y = sp * std::sin(lam), z = cp;
          best = std::max(best, x * x * a(i, i) + y * y * a(j, j) + z * z * a(l, l) +
                                    2 * x * y * a(i, j) + 2 * x * z * a(i, l) +
                                    2 * y * z * a(j, l));
        }
      }
    }
    next_combination_or_end(support, d, done);
  }
  return best;
}

/// Two-sample Kolmogorov-Smirnov p-value (asymptotic, Stephens' small-sample
/// correction).
inline double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double dmax = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    dmax = std::max(dmax, std::abs(ia / na - ib / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * dmax;
  double p = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    p += 2.0 * sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace test_support
