#include "sparsepc/symmetric_matrix.hpp"

#include <Eigen/Eigenvalues>

#include "sparsepc/errors.hpp"

namespace sparsepc {

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& raw) {
  if (raw.rows() != raw.cols() || raw.rows() < 1) {
    throw InvalidArgument("SymmetricMatrix: input must be square with dim >= 1");
  }
  m_ = raw.selfadjointView<Eigen::Upper>();
}

SymmetricMatrix SymmetricMatrix::Zero(int dim) {
  return SymmetricMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

SymmetricMatrix SymmetricMatrix::Identity(int dim) {
  return SymmetricMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

Spectrum eig_sym(const SymmetricMatrix& a) {
  if (!a.all_finite()) {
    throw InvalidArgument("eig_sym: non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.dense());
  if (solver.info() != Eigen::Success) {
    throw InvalidArgument("eig_sym: eigendecomposition failed to converge");
  }
  const int d = a.dim();
  Spectrum s;
  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenvectors.resize(d, d);
  for (int j = 0; j < d; ++j) {
    s.eigenvectors.col(j) = solver.eigenvectors().col(d - 1 - j);
  }
  return s;
}

double eig_max(const SymmetricMatrix& a) {
  if (!a.all_finite()) {
    throw InvalidArgument("eig_max: non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw InvalidArgument("eig_max: eigendecomposition failed to converge");
  }
  return solver.eigenvalues()(a.dim() - 1);
}

}  // namespace sparsepc
