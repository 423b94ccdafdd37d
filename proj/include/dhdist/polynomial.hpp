#pragma once

#include "dhdist/ckdistance.hpp"
#include "dhdist/structures.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace dhdist {

/// Block companion form of a grade-k polynomial: the kn x kn pencil
///   lambda diag(Y_k, I, ..., I) + [ Y_{k-1} ... Y_1 Y_0 ]
///                                 [ -I                 0 ]
///                                 [        ...           ]
/// with Y_i = A_i - J at the skew index and Y_i = A_i elsewhere.  A strong
/// linearization: finite and infinite spectral structure match the source.
/// The represented pencil is lambda * E_block + A_block.
struct CompanionPencil {
  Matrix E_block;
  Matrix A_block;
  int source_grade = 0;

  /// Same pencil in lambda E - A form.
  Matrix pencil_e() const { return E_block; }
  Matrix pencil_a() const { return -A_block; }
};

/// Companion linearization.  Grade 0 is handled as the degenerate pencil
/// lambda * 0 + Y_0 of size n.
CompanionPencil companion(const StructuredPolynomial& p);

/// Singularity of the polynomial, decided by three equivalent tests that
/// must agree: rank of P(1), the common kernel of (J, A_0..A_k), and ranks
/// of P(lambda) at sample points.
bool is_singular_poly(const StructuredPolynomial& p, const Tolerance& tol = {});

/// Distance to the nearest singular polynomial of the same grade and skew
/// index: the common-kernel distance of (J, [A_0, ..., A_k]).
DistanceResult d_sing_poly(const StructuredPolynomial& p,
                           const OptimizerConfig& cfg = {},
                           const Tolerance& tol = {});

/// Distance to the nearest polynomial of index >= 2, which depends on the
/// grade and skew index:
///   j <  k      : common-kernel distance of (0, [A_k, A_{k-1}])
///   j == k > 1  : common-kernel distance of (J, [A_k, A_{k-1}])
///   j == k == 1 or max(n, k) == 1 : +infinity (empty target set),
/// reported as an empty optional.
/// Grade-0 inputs with n > 1 are rejected unless promote_grade_zero is set,
/// in which case the polynomial is viewed at grade 1 first.
std::optional<DistanceResult> d_hi_poly(const StructuredPolynomial& p,
                                        const OptimizerConfig& cfg = {},
                                        const Tolerance& tol = {},
                                        bool promote_grade_zero = false);

/// Regularity and index of a pencil lambda E - A.  The index is the length
/// of the longest Jordan chain at infinity, computed by an orthogonal
/// staircase on W = (lambda_0 E - A)^{-1} E whose kernel stages reproduce
/// the Weyr characteristic at the infinite eigenvalue (the first stage is
/// ker E itself).  Only the classification {<=1, ==2, >=2} is contractual;
/// the exact value and stage dimensions are reported for diagnostics.
struct IndexReport {
  bool is_regular = false;
  int index = 0;
  int infinite_multiplicity = 0;
  std::vector<int> kernel_stages;  // Weyr characteristic at infinity
  std::vector<RankDecision> rank_log;
  bool fast_path_checked = false;  // block test applied (E diagonalizable PSD)
  bool fast_path_agrees = true;
};

IndexReport numeric_index(const Matrix& e, const Matrix& a,
                          const Tolerance& tol = {});
IndexReport numeric_index(const CompanionPencil& cp, const Tolerance& tol = {});

/// Finite eigenvalues of the pencil lambda E - A (pairs with |beta| below
/// the cutoff are treated as infinite and skipped).
std::vector<std::complex<double>> pencil_eigenvalues(const Matrix& e,
                                                     const Matrix& a,
                                                     const Tolerance& tol = {});

/// Finite eigenvalues of a structured polynomial via its companion form.
std::vector<std::complex<double>> polynomial_eigenvalues(
    const StructuredPolynomial& p, const Tolerance& tol = {});

}  // namespace dhdist
