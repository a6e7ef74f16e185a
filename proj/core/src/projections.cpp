#include "sparsepc/projections.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "sparsepc/errors.hpp"

namespace sparsepc {
namespace {

// Duchi, Shalev-Shwartz, Singer, Chandra (2008): the soft-threshold cut that
// projects |w| onto the simplex of the given radius. Assumes sum |w| > radius.
double l1_threshold(const double* abs_values, std::ptrdiff_t size, double radius) {
  std::vector<double> sorted(abs_values, abs_values + size);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double cut = 0.0;
  for (std::ptrdiff_t j = 0; j < size; ++j) {
    running += sorted[j];
    const double candidate = (running - radius) / static_cast<double>(j + 1);
    if (candidate < sorted[j]) {
      cut = candidate;
    } else {
      break;
    }
  }
  return cut;
}

void check_radius(double radius, const char* where) {
  if (!(radius > 0.0)) {
    throw InvalidArgument(std::string(where) + ": radius must be positive");
  }
}

}  // namespace

Eigen::VectorXd project_simplex(const Eigen::VectorXd& w, double radius) {
  check_radius(radius, "project_simplex");
  if (!w.allFinite() || w.size() == 0) {
    throw InvalidArgument("project_simplex: input must be a nonempty finite vector");
  }
  std::vector<double> sorted(w.data(), w.data() + w.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double cut = sorted[0] - radius;  // rho = 1 fallback
  for (std::ptrdiff_t j = 0; j < w.size(); ++j) {
    running += sorted[j];
    const double candidate = (running - radius) / static_cast<double>(j + 1);
    if (sorted[j] > candidate) {
      cut = candidate;
    } else {
      break;
    }
  }
  return (w.array() - cut).max(0.0);
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& w, double radius) {
  check_radius(radius, "project_l1_ball");
  if (!w.allFinite()) {
    throw InvalidArgument("project_l1_ball: non-finite entries");
  }
  const Eigen::VectorXd mags = w.cwiseAbs();
  if (mags.sum() <= radius) {
    return w;
  }
  const double cut = l1_threshold(mags.data(), mags.size(), radius);
  return w.array().sign() * (mags.array() - cut).max(0.0);
}

SymmetricMatrix project_l1_ball(const SymmetricMatrix& w, double radius) {
  check_radius(radius, "project_l1_ball");
  if (!w.all_finite()) {
    throw InvalidArgument("project_l1_ball: non-finite entries");
  }
  const Eigen::MatrixXd& m = w.dense();
  if (m.cwiseAbs().sum() <= radius) {
    return w;
  }
  const Eigen::MatrixXd mags = m.cwiseAbs();
  const double cut = l1_threshold(mags.data(), mags.size(), radius);
  Eigen::MatrixXd out = m.array().sign() * (mags.array() - cut).max(0.0);
  return SymmetricMatrix(out);
}

}  // namespace sparsepc
