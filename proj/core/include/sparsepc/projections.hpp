#pragma once

#include <Eigen/Dense>

#include "sparsepc/symmetric_matrix.hpp"

namespace sparsepc {

/// Euclidean projection onto the scaled simplex {x >= 0, sum x = radius}.
/// Exact sort-based algorithm.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& w, double radius);

/// Euclidean projection of a vector onto the l1 ball of the given radius
/// (identity when already inside).
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& w, double radius);

/// Euclidean projection of the d^2 entry vector of W onto the l1 ball.
/// Soft-thresholding with a common cut preserves symmetry exactly.
SymmetricMatrix project_l1_ball(const SymmetricMatrix& w, double radius);

}  // namespace sparsepc
