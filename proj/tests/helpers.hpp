#pragma once

#include <doctest.h>

#include "dhdist/ckdistance.hpp"
#include "dhdist/generators.hpp"
#include "dhdist/pencil.hpp"
#include "dhdist/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <complex>
#include <vector>

namespace testutil {

using dhdist::Index;
using dhdist::Matrix;
using dhdist::Vector;

/// Brute-force sphere minimum of the tuple objective for n == 2 via a dense
/// angle grid (the antipodal half suffices: the objective is even).
inline double grid_min_objective(const dhdist::StructuredTuple& t,
                                 int points = 100000) {
  REQUIRE(t.dim() == 2);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double theta = M_PI * static_cast<double>(i) / points;
    Vector u(2);
    u << std::cos(theta), std::sin(theta);
    best = std::min(best, dhdist::objective(t, u));
  }
  return best;
}

/// Grid oracle on S^2 for n == 3 (spherical coordinates).
inline double grid_min_objective_3(const dhdist::StructuredTuple& t,
                                   int points = 400) {
  REQUIRE(t.dim() == 3);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= points; ++i) {
    const double phi = M_PI * static_cast<double>(i) / points;
    for (int j = 0; j < 2 * points; ++j) {
      const double theta = M_PI * static_cast<double>(j) / points;
      Vector u(3);
      u << std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta),
          std::cos(phi);
      best = std::min(best, dhdist::objective(t, u));
    }
  }
  return best;
}

/// Central finite difference of the objective along a tangent direction.
inline double directional_derivative_fd(const dhdist::StructuredTuple& t,
                                        const Vector& u, const Vector& dir,
                                        double h = 1e-6) {
  auto retract = [&](double s) {
    Vector v = u + s * dir;
    return Vector(v / v.norm());
  };
  return (dhdist::objective(t, retract(h)) -
          dhdist::objective(t, retract(-h))) /
         (2.0 * h);
}

/// Rank-revealing count of singular values above a cutoff relative to the
/// largest; independent of the library's rank_decision plumbing.
inline int naive_rank(const Matrix& m, double rel = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  int rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel * sv(0)) ++rank;
  return rank;
}

/// Perturbs a pencil on the high-index boundary into a regular index-two
/// pencil: in a basis with the shared kernel direction u of E and R last,
/// adds eps to the leading diagonal blocks of E and R and eps to the
/// coupling column of J, keeping the structure intact.
inline dhdist::DHPencil index_two_regularization(const dhdist::DHPencil& p,
                                                 const Vector& u, double eps) {
  const Index n = p.dim();
  Matrix basis(n, n);
  // orthogonal basis with u in the last column
  basis.col(n - 1) = u / u.norm();
  Eigen::HouseholderQR<Matrix> qr(basis.col(n - 1));
  Matrix q = qr.householderQ();
  basis.leftCols(n - 1) = q.rightCols(n - 1);
  Matrix et = basis.transpose() * p.E() * basis;
  Matrix jt = basis.transpose() * p.J() * basis;
  Matrix rt = basis.transpose() * p.R() * basis;
  et.topLeftCorner(n - 1, n - 1) += eps * Matrix::Identity(n - 1, n - 1);
  rt.topLeftCorner(n - 1, n - 1) += eps * Matrix::Identity(n - 1, n - 1);
  jt(0, n - 1) += eps;
  jt(n - 1, 0) -= eps;
  const Matrix e = basis * et * basis.transpose();
  const Matrix j = basis * jt * basis.transpose();
  const Matrix r = basis * rt * basis.transpose();
  return dhdist::DHPencil(0.5 * (e + e.transpose()),
                          0.5 * (j - j.transpose()),
                          0.5 * (r + r.transpose()));
}

/// Monomial coefficients of det P(lambda) by interpolation at Chebyshev
/// points scaled to [-2, 2]; degree bound grade * n.
inline std::vector<double> det_poly_coefficients(
    const dhdist::StructuredPolynomial& p) {
  const int degree = p.grade() * static_cast<int>(p.dim());
  const int m = degree + 1;
  Eigen::VectorXd values(m), nodes(m);
  for (int i = 0; i < m; ++i) {
    nodes(i) = m == 1 ? 0.0
                      : 2.0 * std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * m));
    values(i) = p.eval(nodes(i)).determinant();
  }
  Eigen::MatrixXd vandermonde(m, m);
  for (int i = 0; i < m; ++i) {
    double power = 1.0;
    for (int j = 0; j < m; ++j) {
      vandermonde(i, j) = power;
      power *= nodes(i);
    }
  }
  Eigen::VectorXd coeffs = vandermonde.fullPivLu().solve(values);
  return std::vector<double>(coeffs.data(), coeffs.data() + m);
}

/// Roots of a monomial-coefficient polynomial via its companion matrix,
/// trailing near-zero leading coefficients trimmed.
inline std::vector<std::complex<double>> poly_roots(
    std::vector<double> coeffs, double trim_rel = 1e-9) {
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  while (coeffs.size() > 1 && std::abs(coeffs.back()) < trim_rel * scale)
    coeffs.pop_back();
  const int d = static_cast<int>(coeffs.size()) - 1;
  if (d <= 0) return {};
  Matrix companion = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) companion(0, i) = -coeffs[d - 1 - i] / coeffs[d];
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Matrix> solver(companion);
  std::vector<std::complex<double>> roots;
  for (Index i = 0; i < d; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

inline void sort_complex(std::vector<std::complex<double>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace testutil
