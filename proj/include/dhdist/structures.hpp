#pragma once

#include "dhdist/linalg.hpp"
#include "dhdist/types.hpp"

#include <utility>
#include <vector>

namespace dhdist {

/// (J, X_0, ..., X_l): one skew-symmetric matrix plus a list of symmetric
/// PSD matrices of equal size.  The common object behind every structured
/// distance in this library.  Construction projects the inputs onto the
/// structure exactly once after a tolerance check.
class StructuredTuple {
 public:
  StructuredTuple(Matrix j, std::vector<Matrix> xs, const Tolerance& tol = {});

  const Matrix& J() const { return j_; }
  const std::vector<Matrix>& Xs() const { return xs_; }
  const Matrix& X(std::size_t i) const { return xs_.at(i); }
  std::size_t num_x() const { return xs_.size(); }
  Index dim() const { return j_.rows(); }

 private:
  Matrix j_;
  std::vector<Matrix> xs_;
};

/// lambda E - (J - R) with E, R symmetric PSD and J skew-symmetric.
class DHPencil {
 public:
  DHPencil(Matrix e, Matrix j, Matrix r, const Tolerance& tol = {});

  const Matrix& E() const { return e_; }
  const Matrix& J() const { return j_; }
  const Matrix& R() const { return r_; }
  Index dim() const { return e_.rows(); }

  /// A = J - R, the constant coefficient.
  Matrix lhs() const { return j_ - r_; }
  /// lambda E - (J - R) evaluated at a point.
  Matrix eval(double lambda) const { return lambda * e_ - (j_ - r_); }

 private:
  Matrix e_, j_, r_;
};

/// -lambda^j J + sum_i lambda^i A_i with every A_i symmetric PSD and J
/// skew-symmetric.  The grade (formal degree) is an explicit attribute:
/// trailing zero coefficients are legal and change the spectral structure
/// at infinity, so it is never inferred from the data.
class StructuredPolynomial {
 public:
  StructuredPolynomial(int grade, int skew_index, Matrix j,
                       std::vector<Matrix> as, const Tolerance& tol = {});

  int grade() const { return grade_; }
  int skew_index() const { return skew_index_; }
  const Matrix& J() const { return j_; }
  const std::vector<Matrix>& As() const { return as_; }
  const Matrix& A(int i) const { return as_.at(static_cast<std::size_t>(i)); }
  Index dim() const { return j_.rows(); }

  Matrix eval(double lambda) const;

  /// Same polynomial viewed at a higher grade (zero-padded coefficients).
  StructuredPolynomial with_grade(int new_grade) const;

 private:
  int grade_;
  int skew_index_;
  Matrix j_;
  std::vector<Matrix> as_;  // grade + 1 coefficients, A_0 first
};

/// lambda^2 M - lambda (G - D) + K with M, D, K symmetric PSD, G skew.
class DHQuadratic {
 public:
  DHQuadratic(Matrix m, Matrix g, Matrix d, Matrix k,
              const Tolerance& tol = {});

  const Matrix& M() const { return m_; }
  const Matrix& G() const { return g_; }
  const Matrix& D() const { return d_; }
  const Matrix& K() const { return k_; }
  Index dim() const { return m_.rows(); }

  Matrix eval(double lambda) const {
    return lambda * lambda * m_ - lambda * (g_ - d_) + k_;
  }

 private:
  Matrix m_, g_, d_, k_;
};

/// E xdot = (J - R) Q x with E^T Q symmetric PSD, J skew, R PSD.
class GeneralDHSystem {
 public:
  GeneralDHSystem(Matrix e, Matrix q, Matrix j, Matrix r,
                  const Tolerance& tol = {});

  const Matrix& E() const { return e_; }
  const Matrix& Q() const { return q_; }
  const Matrix& J() const { return j_; }
  const Matrix& R() const { return r_; }
  Index dim() const { return e_.rows(); }

  /// lambda E - (J - R) Q evaluated at a point.
  Matrix eval(double lambda) const {
    return lambda * e_ - (j_ - r_) * q_;
  }

 private:
  Matrix e_, q_, j_, r_;
};

/// Tuple whose common-kernel distance is the pencil's distance to
/// singularity: (J, [E, R]).
StructuredTuple tuple_from_pencil_sing(const DHPencil& p);

/// Tuple for the distance to high index / instability: (0, [E, R]).
StructuredTuple tuple_from_pencil_hi(const DHPencil& p);

/// The dH pencil lambda E - (J - R) as a grade-1 member of the polynomial
/// class: skew index 0, A_0 = R, A_1 = E.
StructuredPolynomial polynomial_from_pencil(const DHPencil& p);

/// The quadratic as a grade-2, skew-index-1 structured polynomial:
/// J = G, A_0 = K, A_1 = D, A_2 = M.
StructuredPolynomial polynomial_from_quadratic(const DHQuadratic& q);

}  // namespace dhdist
