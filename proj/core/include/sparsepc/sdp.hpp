#pragma once

#include "sparsepc/symmetric_matrix.hpp"

namespace sparsepc {

/// Solution of max Tr(AZ) over {Z >= 0, Tr Z = 1, |Z|_1 <= k}.
///
/// `z` is exactly feasible (a convex blend of the PSD iterate with I/d),
/// `value` = Tr(A z), and `precision` is a certified bound on
/// SDP_k(A) - value obtained from a feasible dual point, so
/// value <= SDP_k(A) <= value + precision.
struct SdpSolution {
  double value = 0.0;
  SymmetricMatrix z;
  double precision = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SdpOptions {
  double rho = 1.0;  // initial ADMM penalty
  int max_iterations = 50'000;
  int gap_check_interval = 10;
  double residual_balance_ratio = 10.0;
  int adapt_interval = 50;    // how often residual balancing may fire
  int adapt_cutoff = 2'000;   // no rho changes after this iteration
  double over_relaxation = 1.6;
};

/// Two-set projection splitting (ADMM consensus form): one block projects
/// onto the spectrahedron {Z >= 0, Tr Z = 1} via eigendecomposition plus a
/// simplex projection of the spectrum, the other onto the entrywise l1 ball
/// of radius k. The linear objective rides along with the spectrahedron
/// block. Iterates until the primal/dual residuals pass
/// epsilon / (2 max(1, |A|_max) d) and the duality gap certificate is at
/// most epsilon, or the iteration cap is hit (then converged == false and
/// the best certified iterate is returned).
SdpSolution sdp_relax(const SymmetricMatrix& a, int k, double epsilon,
                      const SdpOptions& options = {});

}  // namespace sparsepc
