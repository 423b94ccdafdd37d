#include "dhdist/perturbation.hpp"

#include <cmath>

namespace dhdist {

Vector normalize_unit(Vector u) {
  const double norm = u.norm();
  if (!(norm > 1e-300) || !u.allFinite())
    throw ValidationError("perturbation direction must be a nonzero vector");
  return u / norm;
}

Matrix delta_general(const Matrix& y, Vector u) {
  require_square(y, "delta_general");
  require_finite(y, "delta_general");
  u = normalize_unit(std::move(u));
  const Vector yu = y * u;
  const Vector ytu = y.transpose() * u;
  const double uyu = u.dot(yu);
  return -u * ytu.transpose() - yu * u.transpose() +
         uyu * (u * u.transpose());
}

Matrix delta_skew(const Matrix& j, Vector u, const Tolerance& tol) {
  Matrix skew = skew_part_checked(j, tol, "delta_skew");
  u = normalize_unit(std::move(u));
  const Vector ju = skew * u;
  // u^T J u = 0 for skew J, so the general formula loses its last term and
  // the result is u (Ju)^T - (Ju) u^T, manifestly skew.
  return u * ju.transpose() - ju * u.transpose();
}

Matrix delta_psd(const Matrix& x, Vector u, const Tolerance& tol) {
  Matrix sym = psd_checked(x, tol, "delta_psd");
  u = normalize_unit(std::move(u));
  const Vector xu = sym * u;
  const double uxu = u.dot(xu);
  Matrix delta =
      -u * xu.transpose() - xu * u.transpose() + uxu * (u * u.transpose());
  return 0.5 * (delta + delta.transpose());
}

PerturbationSet build_perturbation(const StructuredTuple& t, Vector u,
                                   const Tolerance& tol) {
  PerturbationSet p;
  p.u = normalize_unit(std::move(u));
  if (p.u.size() != t.dim())
    throw ValidationError("build_perturbation: dimension mismatch");
  p.delta_J = delta_skew(t.J(), p.u, tol);
  double sq = p.delta_J.squaredNorm();
  const double ju_norm = (t.J() * p.u).norm();
  p.skew_norm_sq_squared_form = 2.0 * ju_norm * ju_norm;
  p.skew_norm_sq_printed_form = 2.0 * ju_norm;
  p.delta_Xs.reserve(t.num_x());
  for (std::size_t i = 0; i < t.num_x(); ++i) {
    p.delta_Xs.push_back(delta_psd(t.X(i), p.u, tol));
    sq += p.delta_Xs.back().squaredNorm();
  }
  p.total_norm = std::sqrt(sq);
  return p;
}

StructuredTuple apply_perturbation(const StructuredTuple& t,
                                   const PerturbationSet& p,
                                   const Tolerance& tol) {
  if (p.delta_Xs.size() != t.num_x())
    throw ValidationError("apply_perturbation: mismatched perturbation set");
  std::vector<Matrix> xs;
  xs.reserve(t.num_x());
  for (std::size_t i = 0; i < t.num_x(); ++i)
    xs.push_back(t.X(i) + p.delta_Xs[i]);
  return StructuredTuple(t.J() + p.delta_J, std::move(xs), tol);
}

}  // namespace dhdist
