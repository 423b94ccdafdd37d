#pragma once

#include "dhdist/types.hpp"

#include <utility>
#include <vector>

namespace dhdist {

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
struct SymEig {
  Vector values;
  Matrix vectors;  // orthogonal, columns match `values`
};

/// Symmetric eigendecomposition.  The input may deviate from exact symmetry
/// by at most psd_rel * max(1, |S|_F); it is replaced by (S + S^T)/2 before
/// factorization.
SymEig sym_eig(const Matrix& s, const Tolerance& tol = {});

/// Smallest singular value of a (possibly rectangular) nonempty matrix.
double min_singular_value(const Matrix& x);

/// Largest singular value (spectral norm).
double max_singular_value(const Matrix& x);

/// All singular values, descending.
Vector singular_values(const Matrix& x);

/// Numerical rank: singular values below rank_factor * sigma_max count as
/// zero.  The full decision record keeps the governing singular values.
RankDecision rank_decision(const Matrix& x, const Tolerance& tol = {},
                           const std::string& what = "rank");
int numerical_rank(const Matrix& x, const Tolerance& tol = {});

/// Orthonormal basis of the numerical right kernel (n x (n - rank)).
Matrix kernel_basis(const Matrix& x, const Tolerance& tol = {});

/// Orthonormal basis of the range plus kernel split of a symmetric PSD
/// matrix: first block spans eigenvectors above the rank cutoff, trailing
/// block spans the kernel.  Returns (U, rank).
std::pair<Matrix, int> psd_range_kernel_split(const Matrix& s,
                                              const Tolerance& tol = {});

/// True iff lambda_min(S) >= -psd_rel * max(1, |S|_F) after symmetrization.
bool is_psd(const Matrix& s, const Tolerance& tol = {});

/// Splits X into (symmetric, skew-symmetric) parts; X = sym + skew exactly.
std::pair<Matrix, Matrix> split_sym_skew(const Matrix& x);

/// Frobenius norm of a block row [X_0, ..., X_m]:
/// sqrt(sum of squared Frobenius norms).
double tuple_frobenius(const std::vector<Matrix>& matrices);

/// Checked symmetrization: rejects inputs whose asymmetry exceeds
/// psd_rel * max(1, |X|_F), otherwise returns (X + X^T)/2.
Matrix symmetric_part_checked(const Matrix& x, const Tolerance& tol,
                              const char* name);

/// Checked skew projection: rejects inputs with a symmetric part larger than
/// psd_rel * max(1, |X|_F), otherwise returns (X - X^T)/2.
Matrix skew_part_checked(const Matrix& x, const Tolerance& tol,
                         const char* name);

/// Checked PSD symmetrization: symmetric_part_checked plus an is_psd test.
Matrix psd_checked(const Matrix& x, const Tolerance& tol, const char* name);

}  // namespace dhdist
