#include "dhdist/structures.hpp"

#include <cmath>

namespace dhdist {

namespace {

void require_same_dim(Index n, const Matrix& m, const char* name) {
  if (m.rows() != n || m.cols() != n)
    throw ValidationError(std::string(name) + ": dimension mismatch");
}

}  // namespace

StructuredTuple::StructuredTuple(Matrix j, std::vector<Matrix> xs,
                                 const Tolerance& tol) {
  if (xs.empty())
    throw ValidationError("StructuredTuple: needs at least one PSD matrix");
  j_ = skew_part_checked(j, tol, "StructuredTuple.J");
  const Index n = j_.rows();
  xs_.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require_same_dim(n, xs[i], "StructuredTuple.X");
    xs_.push_back(psd_checked(xs[i], tol, "StructuredTuple.X"));
  }
}

DHPencil::DHPencil(Matrix e, Matrix j, Matrix r, const Tolerance& tol) {
  e_ = psd_checked(e, tol, "DHPencil.E");
  j_ = skew_part_checked(j, tol, "DHPencil.J");
  r_ = psd_checked(r, tol, "DHPencil.R");
  require_same_dim(e_.rows(), j_, "DHPencil.J");
  require_same_dim(e_.rows(), r_, "DHPencil.R");
}

StructuredPolynomial::StructuredPolynomial(int grade, int skew_index, Matrix j,
                                           std::vector<Matrix> as,
                                           const Tolerance& tol)
    : grade_(grade), skew_index_(skew_index) {
  if (grade < 0) throw ValidationError("StructuredPolynomial: grade < 0");
  if (skew_index < 0 || skew_index > grade)
    throw ValidationError(
        "StructuredPolynomial: skew index must satisfy 0 <= j <= grade");
  if (as.size() != static_cast<std::size_t>(grade) + 1)
    throw ValidationError(
        "StructuredPolynomial: expected grade + 1 coefficients");
  j_ = skew_part_checked(j, tol, "StructuredPolynomial.J");
  const Index n = j_.rows();
  as_.reserve(as.size());
  for (std::size_t i = 0; i < as.size(); ++i) {
    require_same_dim(n, as[i], "StructuredPolynomial.A");
    as_.push_back(psd_checked(as[i], tol, "StructuredPolynomial.A"));
  }
}

Matrix StructuredPolynomial::eval(double lambda) const {
  Matrix value = -std::pow(lambda, skew_index_) * j_;
  double power = 1.0;
  for (int i = 0; i <= grade_; ++i) {
    value += power * as_[static_cast<std::size_t>(i)];
    power *= lambda;
  }
  return value;
}

StructuredPolynomial StructuredPolynomial::with_grade(int new_grade) const {
  if (new_grade < grade_)
    throw ValidationError("with_grade: cannot lower the grade");
  std::vector<Matrix> padded = as_;
  for (int i = grade_; i < new_grade; ++i)
    padded.push_back(Matrix::Zero(dim(), dim()));
  return StructuredPolynomial(new_grade, skew_index_, j_, std::move(padded));
}

DHQuadratic::DHQuadratic(Matrix m, Matrix g, Matrix d, Matrix k,
                         const Tolerance& tol) {
  m_ = psd_checked(m, tol, "DHQuadratic.M");
  g_ = skew_part_checked(g, tol, "DHQuadratic.G");
  d_ = psd_checked(d, tol, "DHQuadratic.D");
  k_ = psd_checked(k, tol, "DHQuadratic.K");
  require_same_dim(m_.rows(), g_, "DHQuadratic.G");
  require_same_dim(m_.rows(), d_, "DHQuadratic.D");
  require_same_dim(m_.rows(), k_, "DHQuadratic.K");
}

GeneralDHSystem::GeneralDHSystem(Matrix e, Matrix q, Matrix j, Matrix r,
                                 const Tolerance& tol) {
  require_square(e, "GeneralDHSystem.E");
  require_finite(e, "GeneralDHSystem.E");
  require_square(q, "GeneralDHSystem.Q");
  require_finite(q, "GeneralDHSystem.Q");
  e_ = std::move(e);
  q_ = std::move(q);
  j_ = skew_part_checked(j, tol, "GeneralDHSystem.J");
  r_ = psd_checked(r, tol, "GeneralDHSystem.R");
  require_same_dim(e_.rows(), q_, "GeneralDHSystem.Q");
  require_same_dim(e_.rows(), j_, "GeneralDHSystem.J");
  require_same_dim(e_.rows(), r_, "GeneralDHSystem.R");
  Matrix etq = e_.transpose() * q_;
  psd_checked(etq, tol, "GeneralDHSystem.E^T Q");
}

StructuredTuple tuple_from_pencil_sing(const DHPencil& p) {
  return StructuredTuple(p.J(), {p.E(), p.R()});
}

StructuredTuple tuple_from_pencil_hi(const DHPencil& p) {
  return StructuredTuple(Matrix::Zero(p.dim(), p.dim()), {p.E(), p.R()});
}

StructuredPolynomial polynomial_from_pencil(const DHPencil& p) {
  return StructuredPolynomial(1, 0, p.J(), {p.R(), p.E()});
}

StructuredPolynomial polynomial_from_quadratic(const DHQuadratic& q) {
  return StructuredPolynomial(2, 1, q.G(), {q.K(), q.D(), q.M()});
}

}  // namespace dhdist
