#pragma once

#include "dhdist/structures.hpp"

#include <vector>

namespace dhdist {

/// Rank-<=2 perturbation Delta = -uu^T Y - Y uu^T + uu^T Y uu^T for a unit
/// vector u.  (Y + Delta) u = 0 and u^T (Y + Delta) = 0.  The input u is
/// renormalized exactly once; a zero vector is rejected.
Matrix delta_general(const Matrix& y, Vector u);

/// Specialization for skew-symmetric J: Delta = -uu^T J - J uu^T, which is
/// itself skew.  |Delta|_F^2 = 2 |J u|^2 (the squared form; see
/// PerturbationSet for both readings).
Matrix delta_skew(const Matrix& j, Vector u, const Tolerance& tol = {});

/// Specialization for symmetric PSD X: Delta is symmetric, X + Delta stays
/// PSD, and |Delta|_F^2 = 2 |(I - uu^T) X u|^2 + (u^T X u)^2.
Matrix delta_psd(const Matrix& x, Vector u, const Tolerance& tol = {});

/// Structure-preserving perturbation of a whole tuple along one direction u.
/// After applying it, u lies in the kernel of every perturbed matrix.
struct PerturbationSet {
  Vector u;
  Matrix delta_J;
  std::vector<Matrix> delta_Xs;
  double total_norm = 0.0;  // sqrt(|dJ|_F^2 + sum |dX_i|_F^2)

  // Both readings of the skew-part norm formula.  Direct computation of
  // |delta_J|_F^2 gives 2|Ju|^2; some statements of the closed form print
  // the unsquared 2|Ju|.  The squared value is the one that matches the
  // constructed matrix and is used everywhere; the other is kept visible.
  double skew_norm_sq_squared_form = 0.0;  // 2 |J u|^2
  double skew_norm_sq_printed_form = 0.0;  // 2 |J u|
};

PerturbationSet build_perturbation(const StructuredTuple& t, Vector u,
                                   const Tolerance& tol = {});

/// The perturbed tuple (J + dJ, X_i + dX_i), revalidated.
StructuredTuple apply_perturbation(const StructuredTuple& t,
                                   const PerturbationSet& p,
                                   const Tolerance& tol = {});

/// Renormalizes to unit length, rejecting (near-)zero vectors.
Vector normalize_unit(Vector u);

}  // namespace dhdist
