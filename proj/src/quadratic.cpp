#include "dhdist/quadratic.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace dhdist {

GeneralDHSystem dh_linearize(const DHQuadratic& q) {
  const Index n = q.dim();
  Matrix e = Matrix::Zero(2 * n, 2 * n);
  e.topLeftCorner(n, n) = q.M();
  e.bottomRightCorner(n, n) = Matrix::Identity(n, n);
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topLeftCorner(n, n) = q.G();
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  Matrix r = Matrix::Zero(2 * n, 2 * n);
  r.topLeftCorner(n, n) = q.D();
  Matrix qq = Matrix::Zero(2 * n, 2 * n);
  qq.topLeftCorner(n, n) = Matrix::Identity(n, n);
  qq.bottomRightCorner(n, n) = q.K();
  return GeneralDHSystem(e, qq, j, r);
}

DHQuadratic reversal(const DHQuadratic& q) {
  return DHQuadratic(q.K(), q.G(), q.D(), q.M());
}

namespace {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;

MatrixC eval_complex(const DHQuadratic& q, Complex lambda) {
  return lambda * lambda * q.M().cast<Complex>() -
         lambda * (q.G() - q.D()).cast<Complex>() + q.K().cast<Complex>();
}

int complex_rank(const MatrixC& m, const Tolerance& tol) {
  Eigen::JacobiSVD<MatrixC> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double threshold = tol.rank_factor(m.rows(), m.cols()) * sv(0);
  int rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  return rank;
}

// right and left kernel bases of a complex matrix
std::pair<MatrixC, MatrixC> complex_kernels(const MatrixC& m,
                                            const Tolerance& tol) {
  Eigen::JacobiSVD<MatrixC> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold =
      sv.size() > 0 ? tol.rank_factor(m.rows(), m.cols()) * sv(0) : 0.0;
  int rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  return {svd.matrixV().rightCols(m.cols() - rank),
          svd.matrixU().rightCols(m.rows() - rank)};
}

}  // namespace

SpectralReport spectral_check(const DHQuadratic& q, const Tolerance& tol) {
  SpectralReport report;
  const Index n = q.dim();
  const StructuredPolynomial poly = polynomial_from_quadratic(q);
  if (is_singular_poly(poly, tol)) {
    report.is_regular = false;
    return report;
  }

  report.eigenvalues = polynomial_eigenvalues(poly, tol);
  const double scale =
      std::max({1.0, q.M().norm(), q.G().norm(), q.D().norm(), q.K().norm()});
  report.max_real_part = 0.0;
  for (const Complex& lambda : report.eigenvalues) {
    report.max_real_part = std::max(report.max_real_part, lambda.real());
    if (lambda.real() > 1e-8 * scale * (1.0 + std::abs(lambda)))
      report.all_left_half_plane = false;
  }

  // cluster the eigenvalues near the (punctured) imaginary axis and test
  // each cluster for semisimplicity
  const double axis_tol = 1e-6 * scale;
  std::vector<Complex> candidates;
  for (const Complex& lambda : report.eigenvalues)
    if (std::abs(lambda.real()) <= axis_tol * (1.0 + std::abs(lambda)) &&
        std::abs(lambda) > axis_tol)
      candidates.push_back(lambda);
  std::sort(candidates.begin(), candidates.end(),
            [](const Complex& a, const Complex& b) {
              return a.imag() < b.imag();
            });
  for (std::size_t i = 0; i < candidates.size();) {
    SpectralReport::Cluster cluster;
    const double radius = 1e-6 * scale * (1.0 + std::abs(candidates[i]));
    std::size_t jdx = i;
    Complex sum = 0.0;
    while (jdx < candidates.size() &&
           std::abs(candidates[jdx] - candidates[i]) <= radius) {
      sum += candidates[jdx];
      ++jdx;
    }
    cluster.algebraic = static_cast<int>(jdx - i);
    cluster.value = sum / static_cast<double>(cluster.algebraic);
    cluster.geometric =
        static_cast<int>(n) - complex_rank(eval_complex(q, cluster.value), tol);
    cluster.semisimple = cluster.geometric >= cluster.algebraic;
    if (!cluster.semisimple) {
      // second opinion: the cluster is semisimple iff W^H P'(lambda) V is
      // invertible for kernel bases V, W of P(lambda)
      auto [v, w] = complex_kernels(eval_complex(q, cluster.value), tol);
      if (v.cols() > 0 && v.cols() == w.cols()) {
        const MatrixC pprime =
            2.0 * cluster.value * q.M().cast<Complex>() -
            (q.G() - q.D()).cast<Complex>();
        const MatrixC m = w.adjoint() * pprime * v;
        Eigen::JacobiSVD<MatrixC> svd(m);
        const auto& sv = svd.singularValues();
        if (sv.size() > 0 &&
            sv(sv.size() - 1) > tol.rank_factor(n, n) * scale * 10)
          cluster.semisimple = true;
      }
    }
    if (!cluster.semisimple) report.imaginary_axis_semisimple = false;
    report.imaginary_clusters.push_back(cluster);
    i = jdx;
  }

  report.index_at_infinity = numeric_index(companion(poly), tol).index;
  report.index_at_zero =
      numeric_index(companion(polynomial_from_quadratic(reversal(q))), tol)
          .index;
  report.jordan_lengths_ok =
      report.index_at_infinity <= 2 && report.index_at_zero <= 2;
  return report;
}

QuadraticDistanceBundle quadratic_distances(const DHQuadratic& q,
                                            const OptimizerConfig& cfg,
                                            const Tolerance& tol) {
  const Index n = q.dim();
  const Matrix zero = Matrix::Zero(n, n);
  QuadraticDistanceBundle b;
  b.d_sing =
      minimize_sphere(StructuredTuple(q.G(), {q.M(), q.D(), q.K()}, tol), cfg,
                      tol);
  b.d_hi = minimize_sphere(StructuredTuple(zero, {q.M(), q.D()}, tol), cfg,
                           tol);
  DistanceResult dk = minimize_sphere(
      StructuredTuple(zero, {q.D(), q.K()}, tol), cfg, tol);

  if (b.d_hi.distance <= dk.distance) {
    b.d_inst = b.d_hi;
    b.inst_branch = QuadraticDistanceBundle::InstBranch::md;
  } else {
    b.d_inst = dk;
    b.inst_branch = QuadraticDistanceBundle::InstBranch::dk;
  }
  // instability sandwich uses the smaller of the two branch eigenvalues
  const double alpha_lower = std::min(b.d_hi.lower_bound, dk.lower_bound);
  b.d_inst.lower_bound = alpha_lower;
  b.d_inst.upper_bound = std::sqrt(2.0) * alpha_lower;
  return b;
}

QuadraticPerturbation quadratic_certificate(const DHQuadratic& q,
                                            const QuadraticDistanceBundle& b,
                                            QuadraticDistanceKind kind) {
  const Index n = q.dim();
  QuadraticPerturbation p;
  p.dM = Matrix::Zero(n, n);
  p.dG = Matrix::Zero(n, n);
  p.dD = Matrix::Zero(n, n);
  p.dK = Matrix::Zero(n, n);
  switch (kind) {
    case QuadraticDistanceKind::sing: {
      const PerturbationSet& cert = b.d_sing.certificate;
      p.u = cert.u;
      p.dG = cert.delta_J;
      p.dM = cert.delta_Xs[0];
      p.dD = cert.delta_Xs[1];
      p.dK = cert.delta_Xs[2];
      p.total_norm = cert.total_norm;
      break;
    }
    case QuadraticDistanceKind::hi: {
      const PerturbationSet& cert = b.d_hi.certificate;
      p.u = cert.u;
      p.dM = cert.delta_Xs[0];
      p.dD = cert.delta_Xs[1];
      p.total_norm = cert.total_norm;
      break;
    }
    case QuadraticDistanceKind::inst: {
      const PerturbationSet& cert = b.d_inst.certificate;
      p.u = cert.u;
      if (b.inst_branch == QuadraticDistanceBundle::InstBranch::md) {
        p.dM = cert.delta_Xs[0];
        p.dD = cert.delta_Xs[1];
      } else {
        p.dD = cert.delta_Xs[0];
        p.dK = cert.delta_Xs[1];
      }
      p.total_norm = cert.total_norm;
      break;
    }
  }
  return p;
}

}  // namespace dhdist
