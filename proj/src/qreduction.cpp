#include "dhdist/qreduction.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dhdist {

namespace {

// numeric_index of the original system's pencil, skipped when singular
std::optional<IndexReport> try_index(const Matrix& e, const Matrix& a,
                                     const Tolerance& tol) {
  IndexReport report = numeric_index(e, a, tol);
  if (!report.is_regular) return std::nullopt;
  return report;
}

DHPencil pencil_from_congruence(const Matrix& q, const GeneralDHSystem& s,
                                const Tolerance& tol) {
  Matrix e = q.transpose() * s.E();
  Matrix j = q.transpose() * s.J() * q;
  Matrix r = q.transpose() * s.R() * q;
  return DHPencil(0.5 * (e + e.transpose()), j, r, tol);
}

}  // namespace

ReductionReport remove_q_invertible(const GeneralDHSystem& s,
                                    const Tolerance& tol) {
  const Index n = s.dim();
  const Vector sv = singular_values(s.Q());
  const double threshold = tol.rank_factor(n, n) * sv(0);
  if (sv(n - 1) <= threshold)
    throw ValidationError(
        "remove_q_invertible: Q is numerically singular, use the singular "
        "reduction");
  ReductionReport report{pencil_from_congruence(s.Q(), s, tol),
                         s.Q().transpose(),
                         Matrix::Identity(n, n),
                         0,
                         sv(0) / sv(n - 1),
                         false,
                         Matrix(),
                         Matrix(),
                         std::nullopt,
                         std::nullopt};
  report.ill_conditioned = report.e22_condition > 1e8;
  report.original_index = try_index(s.E(), (s.J() - s.R()) * s.Q(), tol);
  report.reduced_index =
      try_index(report.reduced.E(), report.reduced.lhs(), tol);
  return report;
}

ReductionReport remove_q_singular(const GeneralDHSystem& s,
                                  const Tolerance& tol) {
  const Index n = s.dim();
  Eigen::JacobiSVD<Matrix> svd(s.Q(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double threshold = tol.rank_factor(n, n) * (sv.size() ? sv(0) : 0.0);
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++r;
  if (r == 0)
    throw ValidationError("remove_q_singular: Q vanishes, nothing to reduce");

  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  const Matrix q11 = u.leftCols(r).transpose() * s.Q() * v.leftCols(r);
  const Matrix et = u.transpose() * s.E() * v;
  const Matrix lt = u.transpose() * (s.J() - s.R()) * u;

  const Matrix e12 = et.topRightCorner(r, n - r);
  if (e12.norm() > tol.psd_rel * norm_scale(s.E()) * 100.0)
    throw ValidationError(
        "remove_q_singular: E12 block is nonzero, the pair (E, Q) violates "
        "the symmetry of E^T Q");

  double e22_condition = 1.0;
  Matrix recovery_dx, recovery_x;
  if (r < n) {
    const Matrix e22 = et.bottomRightCorner(n - r, n - r);
    const Vector e22_sv = singular_values(e22);
    if (e22_sv(n - r - 1) <=
        tol.rank_factor(n - r, n - r) * e22_sv(0))
      throw ValidationError(
          "remove_q_singular: E22 is singular; the pencil lambda E - Q is "
          "not regular of index at most one");
    e22_condition = e22_sv(0) / e22_sv(n - r - 1);
    const auto e22_lu = e22.partialPivLu();
    const Matrix e21 = et.bottomLeftCorner(n - r, r);
    const Matrix l21 = lt.bottomLeftCorner(n - r, r);
    recovery_dx = -e22_lu.solve(e21);
    recovery_x = e22_lu.solve(l21 * q11);
  }

  // reduced r x r system, with Q11 invertible by construction
  const Matrix e11 = et.topLeftCorner(r, r);
  const Matrix l11 = lt.topLeftCorner(r, r);
  const auto [l11_sym, l11_skew] = split_sym_skew(l11);
  GeneralDHSystem reduced_system(e11, q11, l11_skew, -l11_sym, tol);
  ReductionReport report = remove_q_invertible(reduced_system, tol);

  report.transform_left = q11.transpose() * u.leftCols(r).transpose();
  report.transform_right = v.leftCols(r);
  report.eliminated_dim = static_cast<int>(n - r);
  report.e22_condition = e22_condition;
  report.ill_conditioned = e22_condition > 1e8;
  report.recovery_dx = recovery_dx;
  report.recovery_x = recovery_x;
  report.original_index = try_index(s.E(), (s.J() - s.R()) * s.Q(), tol);
  report.reduced_index =
      try_index(report.reduced.E(), report.reduced.lhs(), tol);
  return report;
}

DHPencil trim_linearize(const DHQuadratic& q, const Tolerance& tol) {
  const Index n = q.dim();
  const SymEig eig = sym_eig(q.K(), tol);
  const double scale =
      std::max(std::abs(eig.values(0)), std::abs(eig.values(n - 1)));
  const double threshold = tol.rank_factor(n, n) * scale;
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    if (eig.values(i) > threshold) ++k;

  Matrix k1, k2;
  if (k == n) {
    // K invertible: no compression, keep the original coordinates
    k1 = q.K();
    k2 = q.K();
  } else {
    // eigenvalues ascending; take the positive part in descending order
    k1 = Matrix::Zero(k, k);
    Matrix w1(n, k);
    for (Index i = 0; i < k; ++i) {
      k1(i, i) = eig.values(n - 1 - i);
      w1.col(i) = eig.vectors.col(n - 1 - i);
    }
    k2 = k1 * w1.transpose();
  }

  Matrix e1 = Matrix::Zero(n + k, n + k);
  e1.topLeftCorner(n, n) = q.M();
  e1.bottomRightCorner(k, k) = k1;
  Matrix j1 = Matrix::Zero(n + k, n + k);
  j1.topLeftCorner(n, n) = q.G();
  j1.topRightCorner(n, k) = -k2.transpose();
  j1.bottomLeftCorner(k, n) = k2;
  Matrix r1 = Matrix::Zero(n + k, n + k);
  r1.topLeftCorner(n, n) = q.D();
  return DHPencil(e1, j1, r1, tol);
}

TrimmedBounds trimmed_bounds(const DHQuadratic& q, const Tolerance& tol) {
  const Index n = q.dim();
  TrimmedBounds b;

  const DHPencil trimmed = trim_linearize(q, tol);
  const Index k = trimmed.dim() - n;

  double lambda_k1 = std::numeric_limits<double>::infinity();
  if (k > 0) {
    const Matrix k1 = trimmed.E().bottomRightCorner(k, k);
    const SymEig k1_eig = sym_eig(k1 * k1, tol);
    lambda_k1 = std::max(k1_eig.values(0), 0.0);
  }
  b.sing_upper = std::sqrt(2.0 * lambda_k1);
  b.sing_upper_certified = std::sqrt(3.0 * lambda_k1);
  if (q.G().norm() <= tol.residual_abs * norm_scale(q.G()))
    b.sing_lower_if_g0 = std::sqrt(lambda_k1);

  const Matrix md = q.M() * q.M() + q.D() * q.D();
  const double lambda_md = std::max(sym_eig(md, tol).values(0), 0.0);
  b.beta = std::min(lambda_md, lambda_k1);
  b.hi_lower = std::sqrt(b.beta);
  b.hi_upper = std::sqrt(2.0 * b.beta);

  const Matrix bound =
      trimmed.J().transpose() * trimmed.J() + trimmed.E() * trimmed.E() +
      trimmed.R() * trimmed.R();
  b.sing_lower_eig = std::sqrt(std::max(sym_eig(bound, tol).values(0), 0.0));
  return b;
}

}  // namespace dhdist
