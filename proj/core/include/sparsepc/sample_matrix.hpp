#pragma once

#include <vector>

#include <Eigen/Dense>

namespace sparsepc {

/// Observed data X_1,...,X_n stored as d x n columns.
struct SampleMatrix {
  Eigen::MatrixXd columns;

  int d() const { return static_cast<int>(columns.rows()); }
  int n() const { return static_cast<int>(columns.cols()); }
};

/// A k-sparse unit vector in R^d: sorted support indices plus values.
struct SparseDirection {
  int dim = 0;
  std::vector<int> support;
  std::vector<double> values;

  int k() const { return static_cast<int>(support.size()); }

  /// Unit direction with values 1/sqrt(k) on the given support.
  static SparseDirection uniform_on(int dim, std::vector<int> support);

  Eigen::VectorXd dense() const;

  /// Throws InvalidArgument unless support is sorted, in-range, and the
  /// values have unit Euclidean norm within 1e-12.
  void validate() const;
};

}  // namespace sparsepc
