#include "dhdist/ckdistance.hpp"

#include "dhdist/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dhdist {

double objective(const StructuredTuple& t, const Vector& u) {
  if (u.size() != t.dim())
    throw ValidationError("objective: dimension mismatch");
  const Vector ju = t.J() * u;
  double value = 2.0 * ju.squaredNorm();
  for (const Matrix& x : t.Xs()) {
    const Vector xu = x * u;
    const double uxu = u.dot(xu);
    const Vector tangential = xu - uxu * u;  // (I - uu^T) X u
    value += 2.0 * tangential.squaredNorm() + uxu * uxu;
  }
  return value;
}

Vector euclidean_gradient(const StructuredTuple& t, const Vector& u) {
  if (u.size() != t.dim())
    throw ValidationError("euclidean_gradient: dimension mismatch");
  Vector grad = 4.0 * (t.J().transpose() * (t.J() * u));
  for (const Matrix& x : t.Xs()) {
    const Vector xu = x * u;
    const double uxu = u.dot(xu);
    grad += 4.0 * (x * xu) - 4.0 * uxu * xu;
  }
  return grad;
}

Vector riemannian_gradient(const StructuredTuple& t, const Vector& u) {
  Vector grad = euclidean_gradient(t, u);
  return grad - u.dot(grad) * u;
}

Matrix eigen_bound_matrix(const StructuredTuple& t) {
  Matrix b = t.J().transpose() * t.J();
  for (const Matrix& x : t.Xs()) b += x * x;
  return 0.5 * (b + b.transpose());
}

namespace {

// Objective/gradient evaluator with the squared coefficient matrices
// precomputed; algebraically identical to the definitional forms above
// (f(u) = 2 u^T J^T J u + sum 2 u^T X_i^2 u - (u^T X_i u)^2 on the sphere).
class SphereObjective {
 public:
  explicit SphereObjective(const StructuredTuple& t) : t_(t) {
    jtj_ = t.J().transpose() * t.J();
    for (const Matrix& x : t.Xs()) x_sq_.push_back(x * x);
  }

  double value(const Vector& u) const {
    double f = 2.0 * u.dot(jtj_ * u);
    for (std::size_t i = 0; i < x_sq_.size(); ++i) {
      const double uxu = u.dot(t_.X(i) * u);
      f += 2.0 * u.dot(x_sq_[i] * u) - uxu * uxu;
    }
    return f;
  }

  Vector tangent_gradient(const Vector& u) const {
    return project(euclidean_gradient(u), u);
  }

  Vector euclidean_gradient(const Vector& u) const {
    Vector grad = 4.0 * (jtj_ * u);
    for (std::size_t i = 0; i < x_sq_.size(); ++i) {
      const Vector xu = t_.X(i) * u;
      grad += 4.0 * (x_sq_[i] * u) - 4.0 * u.dot(xu) * xu;
    }
    return grad;
  }

  Matrix euclidean_hessian(const Vector& u) const {
    Matrix h = 4.0 * jtj_;
    for (std::size_t i = 0; i < x_sq_.size(); ++i) {
      const Vector xu = t_.X(i) * u;
      h += 4.0 * x_sq_[i] - 4.0 * u.dot(xu) * t_.X(i) -
           8.0 * (xu * xu.transpose());
    }
    return h;
  }

  static Vector project(const Vector& v, const Vector& u) {
    return v - u.dot(v) * u;
  }

 private:
  const StructuredTuple& t_;
  Matrix jtj_;
  std::vector<Matrix> x_sq_;
};

struct RunResult {
  Vector u;
  double value = 0.0;
  bool converged = false;
  double grad_norm = 0.0;
  int iterations = 0;
};

// Newton step in an explicit tangent basis.  The projected Hessian of the
// sphere-restricted objective is P (H - (u . grad) I) P; when it is positive
// definite on the tangent space the step converges quadratically, so the
// line search's double-precision floor stops mattering.
bool newton_step(const SphereObjective& f, Vector& u, double& fu) {
  const Index n = u.size();
  if (n < 2) return false;
  Eigen::HouseholderQR<Matrix> qr(u);
  const Matrix q = qr.householderQ();
  const Matrix tangent = q.rightCols(n - 1);  // orthonormal, orthogonal to u

  const Vector grad = f.euclidean_gradient(u);
  const Matrix hess = f.euclidean_hessian(u);
  const Vector g = tangent.transpose() * grad;
  Matrix h = tangent.transpose() * hess * tangent -
             u.dot(grad) * Matrix::Identity(n - 1, n - 1);

  Eigen::LDLT<Matrix> ldlt(0.5 * (h + h.transpose()));
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  const Vector step = tangent * ldlt.solve(-g);
  Vector candidate = u + step;
  candidate /= candidate.norm();
  const double fc = f.value(candidate);
  const double gc = f.tangent_gradient(candidate).norm();
  const double gu = f.tangent_gradient(u).norm();
  if (fc > fu + 1e-12 * (1.0 + std::abs(fu)) || gc >= gu) return false;
  u = std::move(candidate);
  fu = fc;
  return true;
}

RunResult descend(const SphereObjective& f, Vector u,
                  const OptimizerConfig& cfg) {
  RunResult run;
  double fu = f.value(u);
  double step = cfg.initial_step;
  int it = 0;
  bool converged = false;
  double grad_norm = f.tangent_gradient(u).norm();
  const double scale = 1.0 + std::abs(fu);
  for (; it < cfg.max_iterations; ++it) {
    const Vector g = f.tangent_gradient(u);
    grad_norm = g.norm();
    if (grad_norm <= cfg.gradient_tol) {
      converged = true;
      break;
    }
    // switch to Newton once the gradient is small against the local scale
    if (grad_norm <= 1e-3 * scale && newton_step(f, u, fu)) continue;
    const double slope = grad_norm * grad_norm;
    double t = step;
    bool accepted = false;
    while (t >= cfg.min_step) {
      Vector candidate = u - t * g;
      candidate /= candidate.norm();
      const double fc = f.value(candidate);
      if (fc <= fu - cfg.armijo_slope * t * slope) {
        u = std::move(candidate);
        fu = fc;
        accepted = true;
        break;
      }
      t *= cfg.backtrack_factor;
    }
    if (!accepted) break;  // stalled below min_step; keep best iterate
    step = std::min(t / cfg.backtrack_factor, 1e2);
  }
  run.u = std::move(u);
  run.value = fu;
  run.converged = converged;
  run.grad_norm = grad_norm;
  run.iterations = it;
  return run;
}

void normalize_sign(Vector& u) {
  Index imax = 0;
  u.cwiseAbs().maxCoeff(&imax);
  if (u(imax) < 0.0) u = -u;
}

}  // namespace

DistanceResult minimize_sphere(const StructuredTuple& t,
                               const OptimizerConfig& cfg,
                               const Tolerance& tol) {
  cfg.validate();
  const Index n = t.dim();
  DistanceResult result;

  const Matrix bound = eigen_bound_matrix(t);
  const SymEig eig = sym_eig(bound, tol);
  const double lambda_min = std::max(eig.values(0), 0.0);
  result.lower_bound = std::sqrt(lambda_min);
  result.upper_bound = std::sqrt(2.0 * lambda_min);

  SphereObjective f(t);

  std::vector<Vector> starts;
  starts.push_back(eig.vectors.col(0));
  Rng rng(cfg.rng_seed);
  for (int s = 0; s < cfg.num_random_starts; ++s)
    starts.push_back(rng.unit_vector(n));

  RunResult best;
  bool have_best = false;
  if (n == 1) {
    // the sphere is {+1, -1} and f is even
    best.u = Vector::Ones(1);
    best.value = f.value(best.u);
    best.converged = true;
    have_best = true;
  } else {
    for (const Vector& start : starts) {
      RunResult run = descend(f, start, cfg);
      if (!have_best || run.value < best.value) {
        best = std::move(run);
        have_best = true;
      }
    }
  }

  normalize_sign(best.u);
  result.minimizer = best.u;
  result.objective_value = best.value;
  result.distance = std::sqrt(std::max(best.value, 0.0));
  result.converged = best.converged;
  result.gradient_norm = best.grad_norm;
  result.iterations = best.iterations;
  result.starts_used = static_cast<int>(starts.size());
  result.certificate = build_perturbation(t, best.u, tol);
  return result;
}

CommonKernelReport common_kernel_check(const StructuredTuple& t,
                                       const Tolerance& tol) {
  const Index n = t.dim();
  CommonKernelReport report;

  const Matrix quad = eigen_bound_matrix(t);
  Matrix linear = -t.J();
  for (const Matrix& x : t.Xs()) linear += x;
  Matrix stacked(static_cast<Index>(t.num_x() + 1) * n, n);
  stacked.topRows(n) = t.J();
  for (std::size_t i = 0; i < t.num_x(); ++i)
    stacked.middleRows(static_cast<Index>(i + 1) * n, n) = t.X(i);

  // the quadratic form's kernel via the symmetric eigensolver, so the
  // returned basis is orthonormal and consistent with split_common_kernel
  const SymEig eig = sym_eig(quad, tol);
  const double scale = std::max(std::abs(eig.values(n - 1)), 0.0);
  const double threshold = tol.rank_factor(n, n) * scale;
  int dim_quad = 0;
  for (Index i = 0; i < n; ++i)
    if (std::abs(eig.values(i)) <= threshold) ++dim_quad;

  report.dim_quadratic = dim_quad;
  report.dim_linear = static_cast<int>(kernel_basis(linear, tol).cols());
  report.dim_stacked = static_cast<int>(kernel_basis(stacked, tol).cols());

  if (report.dim_quadratic != report.dim_linear ||
      report.dim_linear != report.dim_stacked) {
    std::ostringstream msg;
    msg << "common_kernel_check: characterizations disagree (quadratic "
        << report.dim_quadratic << ", linear " << report.dim_linear
        << ", stacked " << report.dim_stacked << ")";
    throw NumericalAmbiguity(msg.str());
  }
  report.has_common_kernel = dim_quad > 0;
  report.kernel = eig.vectors.leftCols(dim_quad);
  return report;
}

KernelSplit split_common_kernel(const StructuredTuple& t,
                                const Tolerance& tol) {
  const Index n = t.dim();
  const CommonKernelReport report = common_kernel_check(t, tol);
  const int r = report.dim_quadratic;
  if (r == 0)
    return KernelSplit{Matrix::Identity(n, n), t, 0, 0.0};

  const SymEig eig = sym_eig(eigen_bound_matrix(t), tol);
  Matrix u(n, n);
  // non-kernel directions first, common kernel last
  u.leftCols(n - r) = eig.vectors.rightCols(n - r).rowwise().reverse();
  u.rightCols(r) = eig.vectors.leftCols(r);

  auto transformed = [&](const Matrix& m) { return u.transpose() * m * u; };
  double residual = 0.0;
  auto leak = [&](const Matrix& m) {
    double off = m.bottomRightCorner(r, r).norm();
    off = std::max(off, m.topRightCorner(n - r, r).norm());
    off = std::max(off, m.bottomLeftCorner(r, n - r).norm());
    residual = std::max(residual, off);
  };

  const Matrix ju = transformed(t.J());
  leak(ju);
  std::vector<Matrix> xs;
  xs.reserve(t.num_x());
  for (std::size_t i = 0; i < t.num_x(); ++i) {
    const Matrix xu = transformed(t.X(i));
    leak(xu);
    xs.push_back(xu.topLeftCorner(n - r, n - r));
  }

  KernelSplit split{
      u,
      StructuredTuple(ju.topLeftCorner(n - r, n - r), std::move(xs), tol), r,
      residual};
  return split;
}

}  // namespace dhdist
