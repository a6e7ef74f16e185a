#pragma once

#include <Eigen/Dense>

namespace sparsepc {

/// Dense symmetric d x d matrix. Symmetry is exact: construction copies the
/// upper triangle onto the lower one, and set() writes both slots.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  /// Symmetrizes from the upper triangle of `raw` (must be square, dim >= 1).
  explicit SymmetricMatrix(const Eigen::MatrixXd& raw);

  static SymmetricMatrix Zero(int dim);
  static SymmetricMatrix Identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, double value) {
    m_(i, j) = value;
    m_(j, i) = value;
  }

  const Eigen::MatrixXd& dense() const { return m_; }

  double trace() const { return m_.trace(); }
  double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }
  /// Entrywise l1 norm over all d^2 entries.
  double l1_norm() const { return m_.cwiseAbs().sum(); }
  bool all_finite() const { return m_.allFinite(); }

 private:
  Eigen::MatrixXd m_;
};

/// Full eigendecomposition of a symmetric matrix, eigenvalues sorted
/// descending with matching orthonormal eigenvector columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

/// Dense symmetric eigendecomposition (tridiagonalization + implicit QL).
/// Deterministic for fixed input; throws InvalidArgument on non-finite entries.
Spectrum eig_sym(const SymmetricMatrix& a);

/// Largest eigenvalue only (same algorithm, no vectors kept).
double eig_max(const SymmetricMatrix& a);

}  // namespace sparsepc
