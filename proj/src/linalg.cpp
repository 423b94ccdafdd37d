#include "dhdist/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace dhdist {

SymEig sym_eig(const Matrix& s, const Tolerance& tol) {
  require_nonempty(s, "sym_eig");
  require_square(s, "sym_eig");
  require_finite(s, "sym_eig");
  Matrix sym = symmetric_part_checked(s, tol, "sym_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericalAmbiguity("sym_eig: eigensolver did not converge");
  return SymEig{solver.eigenvalues(), solver.eigenvectors()};
}

Vector singular_values(const Matrix& x) {
  require_nonempty(x, "singular_values");
  require_finite(x, "singular_values");
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues();
}

double min_singular_value(const Matrix& x) {
  Vector sv = singular_values(x);
  return sv(sv.size() - 1);
}

double max_singular_value(const Matrix& x) {
  return singular_values(x)(0);
}

RankDecision rank_decision(const Matrix& x, const Tolerance& tol,
                           const std::string& what) {
  Vector sv = singular_values(x);
  const double sigma_max = sv(0);
  const double threshold = tol.rank_factor(x.rows(), x.cols()) * sigma_max;
  RankDecision d;
  d.what = what;
  d.threshold = threshold;
  int rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) {
      ++rank;
      d.sigma_kept = sv(i);
    } else {
      if (d.sigma_dropped == 0.0) d.sigma_dropped = sv(i);
      break;
    }
  }
  if (rank < sv.size()) d.sigma_dropped = sv(rank);
  d.rank = rank;
  if (threshold > 0.0) {
    const double lo = threshold / 10.0, hi = threshold * 10.0;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > lo && sv(i) < hi) d.ambiguous = true;
  }
  return d;
}

int numerical_rank(const Matrix& x, const Tolerance& tol) {
  return rank_decision(x, tol).rank;
}

Matrix kernel_basis(const Matrix& x, const Tolerance& tol) {
  require_nonempty(x, "kernel_basis");
  require_finite(x, "kernel_basis");
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = tol.rank_factor(x.rows(), x.cols()) * sigma_max;
  int rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  return svd.matrixV().rightCols(x.cols() - rank);
}

std::pair<Matrix, int> psd_range_kernel_split(const Matrix& s,
                                              const Tolerance& tol) {
  SymEig eig = sym_eig(s, tol);
  const Index n = s.rows();
  const double sigma_max = std::max(std::abs(eig.values(0)),
                                    std::abs(eig.values(n - 1)));
  const double threshold = tol.rank_factor(n, n) * sigma_max;
  int rank = 0;
  for (Index i = 0; i < n; ++i)
    if (std::abs(eig.values(i)) > threshold) ++rank;
  // eigenvalues ascending: kernel occupies the leading n-rank columns
  Matrix u(n, n);
  u.leftCols(rank) = eig.vectors.rightCols(rank).rowwise().reverse();
  u.rightCols(n - rank) = eig.vectors.leftCols(n - rank);
  return {u, rank};
}

bool is_psd(const Matrix& s, const Tolerance& tol) {
  if (s.size() == 0) return true;
  SymEig eig = sym_eig(s, tol);
  return eig.values(0) >= -tol.psd_rel * norm_scale(s);
}

std::pair<Matrix, Matrix> split_sym_skew(const Matrix& x) {
  require_square(x, "split_sym_skew");
  require_finite(x, "split_sym_skew");
  Matrix sym = 0.5 * (x + x.transpose());
  Matrix skew = 0.5 * (x - x.transpose());
  return {sym, skew};
}

double tuple_frobenius(const std::vector<Matrix>& matrices) {
  if (matrices.empty())
    throw ValidationError("tuple_frobenius: empty matrix list");
  double sum = 0.0;
  for (const Matrix& m : matrices) sum += m.squaredNorm();
  return std::sqrt(sum);
}

Matrix symmetric_part_checked(const Matrix& x, const Tolerance& tol,
                              const char* name) {
  require_square(x, name);
  require_finite(x, name);
  const double asym = (x - x.transpose()).norm();
  if (asym > tol.psd_rel * norm_scale(x))
    throw ValidationError(std::string(name) +
                          ": matrix is not symmetric within tolerance");
  return 0.5 * (x + x.transpose());
}

Matrix skew_part_checked(const Matrix& x, const Tolerance& tol,
                         const char* name) {
  require_square(x, name);
  require_finite(x, name);
  const double sym = (x + x.transpose()).norm();
  if (sym > tol.psd_rel * norm_scale(x))
    throw ValidationError(std::string(name) +
                          ": matrix is not skew-symmetric within tolerance");
  return 0.5 * (x - x.transpose());
}

Matrix psd_checked(const Matrix& x, const Tolerance& tol, const char* name) {
  Matrix sym = symmetric_part_checked(x, tol, name);
  if (!is_psd(sym, tol))
    throw ValidationError(std::string(name) +
                          ": matrix is not positive semidefinite");
  return sym;
}

}  // namespace dhdist
