#include "dhdist/polynomial.hpp"

#include "dhdist/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dhdist {

CompanionPencil companion(const StructuredPolynomial& p) {
  const Index n = p.dim();
  const int k = p.grade();
  auto coeff = [&](int i) -> Matrix {
    Matrix y = p.A(i);
    if (i == p.skew_index()) y -= p.J();
    return y;
  };
  CompanionPencil cp;
  cp.source_grade = k;
  if (k == 0) {
    cp.E_block = Matrix::Zero(n, n);
    cp.A_block = coeff(0);
    return cp;
  }
  const Index dim = static_cast<Index>(k) * n;
  cp.E_block = Matrix::Identity(dim, dim);
  cp.E_block.topLeftCorner(n, n) = coeff(k);
  cp.A_block = Matrix::Zero(dim, dim);
  for (int i = 0; i < k; ++i)
    cp.A_block.block(0, static_cast<Index>(i) * n, n, n) = coeff(k - 1 - i);
  for (int row = 1; row < k; ++row)
    cp.A_block.block(static_cast<Index>(row) * n,
                     static_cast<Index>(row - 1) * n, n, n) =
        -Matrix::Identity(n, n);
  return cp;
}

bool is_singular_poly(const StructuredPolynomial& p, const Tolerance& tol) {
  const Index n = p.dim();
  // P(1) = -J + A_0 + ... + A_k, which is exactly the linear characterization
  Matrix at_one = p.eval(1.0);
  const int rank_at_one = numerical_rank(at_one, tol);
  const bool singular_at_one = rank_at_one < n;

  std::vector<Matrix> xs(p.As().begin(), p.As().end());
  const CommonKernelReport kernel =
      common_kernel_check(StructuredTuple(p.J(), xs, tol), tol);

  Rng rng(424242);
  bool singular_sampled = true;
  const int samples = static_cast<int>(std::max<Index>(
      5, static_cast<Index>(p.grade()) * n + 1));
  for (int s = 0; s < samples; ++s) {
    const Matrix value = p.eval(rng.uniform(-2.0, 2.0));
    if (numerical_rank(value, tol) == n) {
      singular_sampled = false;
      break;
    }
  }

  if (singular_at_one != kernel.has_common_kernel ||
      kernel.has_common_kernel != singular_sampled) {
    std::ostringstream msg;
    msg << "is_singular_poly: characterizations disagree (P(1) singular: "
        << singular_at_one << ", common kernel: " << kernel.has_common_kernel
        << ", sampled: " << singular_sampled << ")";
    throw NumericalAmbiguity(msg.str());
  }
  return kernel.has_common_kernel;
}

DistanceResult d_sing_poly(const StructuredPolynomial& p,
                           const OptimizerConfig& cfg, const Tolerance& tol) {
  std::vector<Matrix> xs(p.As().begin(), p.As().end());
  return minimize_sphere(StructuredTuple(p.J(), xs, tol), cfg, tol);
}

std::optional<DistanceResult> d_hi_poly(const StructuredPolynomial& p,
                                        const OptimizerConfig& cfg,
                                        const Tolerance& tol,
                                        bool promote_grade_zero) {
  const Index n = p.dim();
  int k = p.grade();
  const int j = p.skew_index();
  if (k == 0) {
    if (n == 1) return std::nullopt;  // max(n, k) == 1
    if (!promote_grade_zero)
      throw ValidationError(
          "d_hi_poly: grade-0 input with n > 1; the high-index distance "
          "depends on the grade, pass promote_grade_zero to view it at "
          "grade 1");
    return d_hi_poly(p.with_grade(1), cfg, tol, false);
  }
  if (std::max<Index>(n, k) == 1 || (j == k && k == 1)) return std::nullopt;
  Matrix skew = (j == k) ? p.J() : Matrix::Zero(n, n);
  return minimize_sphere(StructuredTuple(skew, {p.A(k), p.A(k - 1)}, tol),
                         cfg, tol);
}

std::vector<std::complex<double>> pencil_eigenvalues(const Matrix& e,
                                                     const Matrix& a,
                                                     const Tolerance& tol) {
  require_square(e, "pencil_eigenvalues");
  require_finite(e, "pencil_eigenvalues");
  require_finite(a, "pencil_eigenvalues");
  // det(lambda E - A) = 0  <=>  A v = lambda E v
  Eigen::GeneralizedEigenSolver<Matrix> solver(a, e, false);
  if (solver.info() != Eigen::Success)
    throw NumericalAmbiguity("pencil_eigenvalues: QZ did not converge");
  std::vector<std::complex<double>> values;
  const auto alphas = solver.alphas();
  const auto betas = solver.betas();
  const double scale =
      std::max({1.0, e.norm(), a.norm()});
  for (Index i = 0; i < alphas.size(); ++i) {
    if (std::abs(betas(i)) <=
        tol.rank_factor(e.rows(), e.cols()) * scale * 100.0)
      continue;  // infinite eigenvalue
    values.push_back(alphas(i) / betas(i));
  }
  return values;
}

std::vector<std::complex<double>> polynomial_eigenvalues(
    const StructuredPolynomial& p, const Tolerance& tol) {
  const CompanionPencil cp = companion(p);
  return pencil_eigenvalues(cp.pencil_e(), cp.pencil_a(), tol);
}

namespace {

// Weyr characteristic of the zero eigenvalue of a square matrix by
// orthogonal deflation: take the kernel, compress onto its complement,
// repeat.  Stage i reports dim ker(W^i) - dim ker(W^{i-1}).
std::vector<int> zero_weyr_staircase(Matrix w, const Tolerance& tol,
                                     std::vector<RankDecision>* log) {
  std::vector<int> stages;
  int guard = 0;
  while (w.rows() > 0 && guard++ <= 2 * static_cast<int>(w.rows()) + 2) {
    RankDecision d = rank_decision(w, tol, "staircase stage");
    if (log) log->push_back(d);
    const int kdim = static_cast<int>(w.rows()) - d.rank;
    if (kdim == 0) break;
    stages.push_back(kdim);
    if (d.rank == 0) break;
    Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullV);
    const Matrix complement = svd.matrixV().leftCols(d.rank);
    w = (complement.transpose() * w * complement).eval();
  }
  return stages;
}

}  // namespace

IndexReport numeric_index(const Matrix& e, const Matrix& a,
                          const Tolerance& tol) {
  require_square(e, "numeric_index");
  require_square(a, "numeric_index");
  require_finite(e, "numeric_index");
  require_finite(a, "numeric_index");
  if (e.rows() != a.rows())
    throw ValidationError("numeric_index: dimension mismatch");
  const Index n = e.rows();
  IndexReport report;

  // find a regularization point: the sample with the best-conditioned
  // lambda_0 E - A wins
  Rng rng(31337);
  const int samples = static_cast<int>(std::max<Index>(7, n + 1));
  double best_sigma = -1.0;
  double best_lambda = 0.0;
  const double scale = std::max({1.0, e.norm(), a.norm()});
  for (int s = 0; s < samples; ++s) {
    const double lambda = rng.uniform(-2.0, 2.0);
    const double sigma = min_singular_value(lambda * e - a);
    if (sigma > best_sigma) {
      best_sigma = sigma;
      best_lambda = lambda;
    }
  }
  report.is_regular = best_sigma > tol.rank_factor(n, n) * scale * 10.0;
  if (!report.is_regular) return report;  // index undefined for singular pencils

  const Matrix shifted = best_lambda * e - a;
  const Matrix w = shifted.partialPivLu().solve(e);
  report.kernel_stages = zero_weyr_staircase(w, tol, &report.rank_log);
  report.index = static_cast<int>(report.kernel_stages.size());
  report.infinite_multiplicity = 0;
  for (int s : report.kernel_stages) report.infinite_multiplicity += s;

  // block fast path: with E symmetric PSD and split as diag(E11, 0), the
  // trailing block of A being invertible forces index exactly one
  const bool e_symmetric = (e - e.transpose()).norm() <= tol.psd_rel * norm_scale(e);
  if (e_symmetric && is_psd(0.5 * (e + e.transpose()), tol)) {
    report.fast_path_checked = true;
    const auto [u, rank_e] = psd_range_kernel_split(0.5 * (e + e.transpose()), tol);
    if (rank_e == n) {
      report.fast_path_agrees = (report.index == 0);
    } else {
      const Index m = n - rank_e;
      const Matrix a22 =
          (u.transpose() * a * u).bottomRightCorner(m, m);
      const bool a22_invertible = numerical_rank(a22, tol) == m;
      if (a22_invertible)
        report.fast_path_agrees = (report.index == 1);
      else
        report.fast_path_agrees = (report.index >= 2);
    }
    if (!report.fast_path_agrees)
      throw NumericalAmbiguity(
          "numeric_index: staircase and block fast path disagree");
  }
  return report;
}

IndexReport numeric_index(const CompanionPencil& cp, const Tolerance& tol) {
  return numeric_index(cp.pencil_e(), cp.pencil_a(), tol);
}

}  // namespace dhdist
