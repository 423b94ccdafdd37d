#pragma once

#include "dhdist/polynomial.hpp"
#include "dhdist/structures.hpp"

#include <optional>

namespace dhdist {

/// Result of removing the right coefficient Q from E xdot = (J - R) Q x.
/// The reduced pencil is T_left (lambda E - (J - R) Q) T_right, so its
/// finite eigenvalues match the original's.  When Q is singular the state
/// is split, the trailing component is eliminated through the invertible
/// E22 block, and the eliminated variables are recoverable as
///   x2 = recovery_dx * x1' + recovery_x * x1.
struct ReductionReport {
  DHPencil reduced;
  Matrix transform_left;   // r x n
  Matrix transform_right;  // n x r
  int eliminated_dim = 0;
  double e22_condition = 1.0;
  bool ill_conditioned = false;  // condition above 1e8
  Matrix recovery_dx;  // (n - r) x r, empty when nothing was eliminated
  Matrix recovery_x;
  std::optional<IndexReport> original_index;  // of lambda E - (J - R) Q
  std::optional<IndexReport> reduced_index;
};

/// Congruence reduction for invertible Q: the pencil
/// lambda Q^T E - Q^T (J - R) Q keeps the structure constraints and the
/// eigenvalues.  Throws if Q is numerically singular.
ReductionReport remove_q_invertible(const GeneralDHSystem& s,
                                    const Tolerance& tol = {});

/// Reduction for singular Q via the singular value decomposition
/// U^T Q V = diag(Q11, 0): splits the state, eliminates the trailing
/// variables through E22 (which must be invertible: the pencil
/// lambda E - Q must be regular of index at most one), then removes the
/// invertible Q11 by congruence.  Works for invertible Q too, where the
/// split is trivial.
ReductionReport remove_q_singular(const GeneralDHSystem& s,
                                  const Tolerance& tol = {});

/// Trimmed first-order form of a quadratic, of size n + rank(K):
///   E1 = diag(M, K1), J1 = [[G, -K2^T], [K2, 0]], R1 = diag(D, 0),
/// where K1 is the compression of K to the orthogonal complement of its
/// kernel (kept verbatim when K is invertible, otherwise diagonal with
/// descending eigenvalues) and K2 carries the corresponding basis.
DHPencil trim_linearize(const DHQuadratic& q, const Tolerance& tol = {});

/// Eigenvalue-based bounds for the distances of the trimmed pencil.
/// `sing_upper` and `sing_lower_if_g0` are the closed-form expressions in
/// lambda_min(K1^2); `sing_upper_certified` is the always-valid upper bound
/// sqrt(3 lambda_min(K1^2)) attained by perturbing along the eigenvector of
/// the smallest K1 eigenvalue, and `sing_lower_eig` is the lower bound
/// sqrt(lambda_min(-J1^2 + E1^2 + R1^2)) computed from the assembled
/// matrices.  The closed forms can disagree with the certified values; all
/// are reported.
struct TrimmedBounds {
  double sing_upper = 0.0;  // sqrt(2 lambda_min(K1^2)); +inf when K = 0
  std::optional<double> sing_lower_if_g0;  // sqrt(lambda_min(K1^2))
  double hi_lower = 0.0;   // sqrt(beta)
  double hi_upper = 0.0;   // sqrt(2 beta)
  double beta = 0.0;       // min(lambda_min(M^2 + D^2), lambda_min(K1^2))
  double sing_upper_certified = 0.0;  // sqrt(3 lambda_min(K1^2))
  double sing_lower_eig = 0.0;
};

TrimmedBounds trimmed_bounds(const DHQuadratic& q, const Tolerance& tol = {});

}  // namespace dhdist
