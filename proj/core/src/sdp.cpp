#include "sparsepc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "sparsepc/errors.hpp"
#include "sparsepc/projections.hpp"
#include "sparsepc/statistics.hpp"

namespace sparsepc {
namespace {

double lambda_max(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(m.rows() - 1);
}

// Blend a PSD trace-one iterate toward I/d until the entrywise l1 norm is
// exactly k, yielding a point feasible for the full constraint set.
Eigen::MatrixXd feasible_blend(const Eigen::MatrixXd& z1, int k) {
  const int d = static_cast<int>(z1.rows());
  const double l1 = z1.cwiseAbs().sum();
  if (l1 <= static_cast<double>(k)) return z1;
  const double t = (l1 - k) / (l1 - 1.0);  // l1 > k >= 1 here
  Eigen::MatrixXd blended = (1.0 - t) * z1;
  blended.diagonal().array() += t / static_cast<double>(d);
  return blended;
}

}  // namespace

SdpSolution sdp_relax(const SymmetricMatrix& a, int k, double epsilon,
                      const SdpOptions& options) {
  const int d = a.dim();
  if (k < 1 || k > d) throw InvalidArgument("sdp_relax: k must satisfy 1 <= k <= d");
  if (!(epsilon > 0.0)) throw InvalidArgument("sdp_relax: epsilon must be positive");
  if (!a.all_finite()) throw InvalidArgument("sdp_relax: non-finite entries");

  SdpSolution out;
  if (d == 1 || k == 1) {
    // At k = 1 the constraints force Z diagonal: |Z|_1 >= Tr Z = 1 with
    // equality only when every off-diagonal vanishes. The optimum is exact.
    Eigen::Index arg = 0;
    const double top = a.dense().diagonal().maxCoeff(&arg);
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(d, d);
    z(arg, arg) = 1.0;
    out.value = top;
    out.z = SymmetricMatrix(z);
    out.precision = 0.0;
    out.iterations = 0;
    out.converged = true;
    return out;
  }

  const Eigen::MatrixXd& A = a.dense();
  const double a_max = a.max_abs();
  const double residual_tol = epsilon / (2.0 * std::max(1.0, a_max) * d);
  const double radius = static_cast<double>(k);

  double rho = options.rho;
  Eigen::MatrixXd z1 = Eigen::MatrixXd::Identity(d, d) / d;
  Eigen::MatrixXd z2 = z1;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d, d);  // scaled dual, Y = rho * u

  double best_value = -std::numeric_limits<double>::infinity();
  double best_gap = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best_z = z1;

  const double ub_static = std::min(lambda_max(A), dual_bound(a, k));

  auto finalize = [&]() -> SdpSolution {
    out.value = best_value;
    out.z = SymmetricMatrix(best_z);
    out.precision = best_gap;
    return out;
  };

  auto certify = [&](int iteration) -> bool {
    const Eigen::MatrixXd dual_point = rho * u;  // candidate U = -Y in the dual
    const double ub_dynamic =
        lambda_max(A - dual_point) + radius * dual_point.cwiseAbs().maxCoeff();
    const double ub = std::min(ub_static, ub_dynamic);
    const Eigen::MatrixXd zf = feasible_blend(z1, k);
    const double lb = (A.array() * zf.array()).sum();
    const double gap = std::max(0.0, ub - lb);
    if (gap < best_gap || (gap == best_gap && lb > best_value)) {
      best_gap = gap;
      best_value = lb;
      best_z = zf;
    }
    if (best_gap <= epsilon) {
      out.iterations = iteration;
      out.converged = true;
      return true;
    }
    return false;
  };

  const int max_iterations = options.max_iterations;
  for (int step = 0; step < max_iterations; ++step) {
    const int iteration = step + 1;
    // Spectrahedron block: project z2 - u + A/rho onto {Z >= 0, Tr Z = 1}.
    Eigen::MatrixXd target = z2 - u + A / rho;
    target = 0.5 * (target + target.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(target);
    const Eigen::VectorXd lam = project_simplex(eig.eigenvalues(), 1.0);
    z1.noalias() = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
    z1 = 0.5 * (z1 + z1.transpose()).eval();

    // l1-ball block on the over-relaxed point, then dual ascent.
    const Eigen::MatrixXd z2_prev = z2;
    const Eigen::MatrixXd relaxed =
        options.over_relaxation * z1 + (1.0 - options.over_relaxation) * z2;
    Eigen::MatrixXd v = relaxed + u;
    if (v.cwiseAbs().sum() > radius) {
      const Eigen::Map<const Eigen::VectorXd> flat(v.data(), v.size());
      const Eigen::VectorXd projected = project_l1_ball(flat, radius);
      z2 = Eigen::Map<const Eigen::MatrixXd>(projected.data(), d, d);
    } else {
      z2 = v;
    }
    u += relaxed - z2;

    const double primal_res = (z1 - z2).norm();
    const double dual_res = rho * (z2 - z2_prev).norm();

    const bool residuals_ok = primal_res <= residual_tol && dual_res <= residual_tol;
    if (residuals_ok || iteration % options.gap_check_interval == 0) {
      if (certify(iteration)) return finalize();
    }

    // Residual balancing keeps the two residuals within a decade. Adapting
    // only periodically, and not at all late in the run, avoids the rattle
    // that repeated rho jumps inject near the solution.
    if (iteration % options.adapt_interval == 0 && iteration <= options.adapt_cutoff) {
      if (primal_res > options.residual_balance_ratio * dual_res) {
        rho *= 2.0;
        u *= 0.5;
      } else if (dual_res > options.residual_balance_ratio * primal_res) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }

  certify(max_iterations);
  out.iterations = max_iterations;
  out.converged = best_gap <= epsilon;
  return finalize();
}

}  // namespace sparsepc
