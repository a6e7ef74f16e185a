#include "sparsepc/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sparsepc/errors.hpp"

namespace sparsepc {
namespace {

// Cyclic Jacobi eigenvalue sweeps on a dense symmetric k x k buffer
// (row-major, k small). Returns the largest eigenvalue; optionally
// accumulates rotations to recover the matching eigenvector.
class JacobiKernel {
 public:
  explicit JacobiKernel(int max_k)
      : a_(static_cast<std::size_t>(max_k) * max_k),
        v_(static_cast<std::size_t>(max_k) * max_k) {}

  void load(const Eigen::MatrixXd& full, const int* support, int k) {
    k_ = k;
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) {
        a_[r * k + c] = full(support[r], support[c]);
      }
    }
  }

  double max_eigenvalue(bool want_vector) {
    if (k_ == 1) {
      if (want_vector) v_[0] = 1.0;
      return a_[0];
    }
    if (want_vector) {
      std::fill(v_.begin(), v_.begin() + static_cast<std::size_t>(k_) * k_, 0.0);
      for (int i = 0; i < k_; ++i) v_[i * k_ + i] = 1.0;
    }
    double scale = 0.0;
    for (int i = 0; i < k_ * k_; ++i) scale = std::max(scale, std::abs(a_[i]));
    if (scale == 0.0) return 0.0;
    const double tol = 1e-15 * scale;
    for (int sweep = 0; sweep < 64; ++sweep) {
      double off = 0.0;
      for (int p = 0; p < k_ - 1; ++p) {
        for (int q = p + 1; q < k_; ++q) {
          off = std::max(off, std::abs(a_[p * k_ + q]));
        }
      }
      if (off <= tol) break;
      for (int p = 0; p < k_ - 1; ++p) {
        for (int q = p + 1; q < k_; ++q) {
          rotate(p, q, want_vector);
        }
      }
    }
    double best = a_[0];
    int best_idx = 0;
    for (int i = 1; i < k_; ++i) {
      if (a_[i * k_ + i] > best) {
        best = a_[i * k_ + i];
        best_idx = i;
      }
    }
    top_column_ = best_idx;
    return best;
  }

  // Eigenvector for the eigenvalue returned by the last max_eigenvalue(true).
  void top_vector(double* out) const {
    for (int i = 0; i < k_; ++i) out[i] = v_[i * k_ + top_column_];
  }

 private:
  void rotate(int p, int q, bool want_vector) {
    const double apq = a_[p * k_ + q];
    if (apq == 0.0) return;
    const double app = a_[p * k_ + p];
    const double aqq = a_[q * k_ + q];
    const double tau = (aqq - app) / (2.0 * apq);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    for (int i = 0; i < k_; ++i) {
      const double aip = a_[i * k_ + p];
      const double aiq = a_[i * k_ + q];
      a_[i * k_ + p] = c * aip - s * aiq;
      a_[i * k_ + q] = s * aip + c * aiq;
    }
    for (int i = 0; i < k_; ++i) {
      const double api = a_[p * k_ + i];
      const double aqi = a_[q * k_ + i];
      a_[p * k_ + i] = c * api - s * aqi;
      a_[q * k_ + i] = s * api + c * aqi;
    }
    if (want_vector) {
      for (int i = 0; i < k_; ++i) {
        const double vip = v_[i * k_ + p];
        const double viq = v_[i * k_ + q];
        v_[i * k_ + p] = c * vip - s * viq;
        v_[i * k_ + q] = s * vip + c * viq;
      }
    }
  }

  int k_ = 0;
  int top_column_ = 0;
  std::vector<double> a_;
  std::vector<double> v_;
};

}  // namespace

SymmetricMatrix empirical_covariance(const SampleMatrix& x) {
  if (x.d() < 1 || x.n() < 1) {
    throw InvalidArgument("empirical_covariance: empty sample");
  }
  if (!x.columns.allFinite()) {
    throw InvalidArgument("empirical_covariance: non-finite entries");
  }
  Eigen::MatrixXd sigma = (x.columns * x.columns.transpose()) / static_cast<double>(x.n());
  return SymmetricMatrix(sigma);
}

std::uint64_t support_count(int d, int k) {
  const std::uint64_t cap = std::numeric_limits<std::int64_t>::max();
  std::uint64_t count = 1;
  k = std::min(k, d - k);
  for (int i = 1; i <= k; ++i) {
    const double projected = static_cast<double>(count) * (d - k + i) / i;
    if (projected > static_cast<double>(cap)) return cap;
    count = count * static_cast<std::uint64_t>(d - k + i) / static_cast<std::uint64_t>(i);
  }
  return count;
}

SparseEigResult sparse_eigmax(const SymmetricMatrix& a, int k, std::uint64_t budget) {
  const int d = a.dim();
  if (k < 1 || k > d) throw InvalidArgument("sparse_eigmax: k must satisfy 1 <= k <= d");
  if (!a.all_finite()) throw InvalidArgument("sparse_eigmax: non-finite entries");
  const std::uint64_t supports = support_count(d, k);
  if (supports > budget) {
    throw ResourceLimit("sparse_eigmax: C(" + std::to_string(d) + "," + std::to_string(k) +
                        ") = " + std::to_string(supports) + " supports exceeds budget " +
                        std::to_string(budget));
  }

  const Eigen::MatrixXd& m = a.dense();
  const Eigen::MatrixXd abs_m = m.cwiseAbs();
  JacobiKernel kernel(k);

  std::vector<int> support(k);
  for (int i = 0; i < k; ++i) support[i] = i;
  std::vector<int> best_support;
  double best = -std::numeric_limits<double>::infinity();

  for (;;) {
    // Gershgorin bound on lambda_max(A_S); skip supports that cannot win.
    double ub = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < k; ++r) {
      double row = m(support[r], support[r]);
      for (int c = 0; c < k; ++c) {
        if (c != r) row += abs_m(support[r], support[c]);
      }
      ub = std::max(ub, row);
    }
    if (ub > best) {
      kernel.load(m, support.data(), k);
      const double value = kernel.max_eigenvalue(false);
      if (value > best) {
        best = value;
        best_support = support;
      }
    }
    // Next support in lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && support[pos] == d - k + pos) --pos;
    if (pos < 0) break;
    ++support[pos];
    for (int i = pos + 1; i < k; ++i) support[i] = support[i - 1] + 1;
  }

  kernel.load(m, best_support.data(), k);
  kernel.max_eigenvalue(true);
  std::vector<double> local(k);
  kernel.top_vector(local.data());
  // Canonical sign: largest-magnitude coordinate positive.
  int peak = 0;
  for (int i = 1; i < k; ++i) {
    if (std::abs(local[i]) > std::abs(local[peak])) peak = i;
  }
  double norm = 0.0;
  for (const double value : local) norm += value * value;
  const double rescale = (local[peak] < 0.0 ? -1.0 : 1.0) / std::sqrt(norm);
  for (double& value : local) value *= rescale;

  SparseEigResult result;
  result.value = best;
  result.direction.dim = d;
  result.direction.support = std::move(best_support);
  result.direction.values = std::move(local);
  return result;
}

double dual_bound(const SymmetricMatrix& a, int k) {
  const int d = a.dim();
  if (k < 1 || k > d) throw InvalidArgument("dual_bound: k must satisfy 1 <= k <= d");
  double diag = 0.0;
  double off = 0.0;
  for (int i = 0; i < d; ++i) {
    diag = std::max(diag, std::abs(a(i, i)));
    for (int j = i + 1; j < d; ++j) {
      off = std::max(off, std::abs(a(i, j)));
    }
  }
  return diag + k * off;
}

}  // namespace sparsepc
