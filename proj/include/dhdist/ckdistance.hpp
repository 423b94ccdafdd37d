#pragma once

#include "dhdist/perturbation.hpp"
#include "dhdist/structures.hpp"

#include <cstdint>
#include <vector>

namespace dhdist {

struct OptimizerConfig {
  int num_random_starts = 16;
  int max_iterations = 500;
  double gradient_tol = 1e-10;
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double armijo_slope = 1e-4;
  double min_step = 1e-18;
  std::uint64_t rng_seed = 20240913;

  void validate() const {
    if (num_random_starts < 0 || max_iterations <= 0 || gradient_tol <= 0 ||
        initial_step <= 0 || backtrack_factor <= 0 || backtrack_factor >= 1 ||
        min_step <= 0)
      throw ValidationError("invalid optimizer configuration");
  }
};

struct DistanceResult {
  double distance = 0.0;         // sqrt of the best objective value
  double lower_bound = 0.0;      // sqrt(lambda_min(J^T J + sum X_i^2))
  double upper_bound = 0.0;      // sqrt(2) * lower_bound
  double objective_value = 0.0;  // distance^2
  Vector minimizer;              // unit vector, sign-normalized
  PerturbationSet certificate;   // structure-preserving witness at minimizer
  int starts_used = 0;
  bool converged = false;  // gradient tolerance reached for the best start
  double gradient_norm = 0.0;
  int iterations = 0;
};

/// f(u) = 2|Ju|^2 + sum_i ( 2|(I - uu^T) X_i u|^2 + (u^T X_i u)^2 ),
/// the squared Frobenius norm of the optimal structure-preserving
/// perturbation along u.  Evaluated in the definitional form.
double objective(const StructuredTuple& t, const Vector& u);

/// grad f = 4 J^T J u + sum_i ( 4 X_i^2 u - 4 (u^T X_i u) X_i u ).
Vector euclidean_gradient(const StructuredTuple& t, const Vector& u);

/// Projection of the Euclidean gradient onto the tangent space at u.
Vector riemannian_gradient(const StructuredTuple& t, const Vector& u);

/// J^T J + X_0^2 + ... + X_l^2, the symmetric PSD matrix whose smallest
/// eigenvalue sandwiches the squared distance within a factor of two.
Matrix eigen_bound_matrix(const StructuredTuple& t);

/// Minimizes f over the unit sphere: multistart projected gradient descent
/// with backtracking line search, seeded with the smallest eigenvector of
/// eigen_bound_matrix plus uniform random starts.  Deterministic for a
/// fixed seed.  Non-convergence is reported via the flag, never thrown.
DistanceResult minimize_sphere(const StructuredTuple& t,
                               const OptimizerConfig& cfg = {},
                               const Tolerance& tol = {});

/// The three equivalent descriptions of the common kernel:
///   ker J cap ker X_0 cap ... = ker(J^T J + sum X_i^2) = ker(-J + sum X_i).
/// All three are computed; a dimension disagreement throws.
struct CommonKernelReport {
  bool has_common_kernel = false;
  Matrix kernel;  // orthonormal basis from the quadratic characterization
  int dim_quadratic = 0;  // ker(J^T J + sum X_i^2)
  int dim_linear = 0;     // ker(-J + sum X_i)
  int dim_stacked = 0;    // ker([J; X_0; ...; X_l])
};

CommonKernelReport common_kernel_check(const StructuredTuple& t,
                                       const Tolerance& tol = {});

/// Orthogonal splitting that isolates the common kernel: the last r columns
/// of U span it, and U^T J U, U^T X_i U are block diagonal with the trailing
/// r x r block zero.  The reduced leading tuple has no common kernel.
struct KernelSplit {
  Matrix U;
  StructuredTuple reduced;
  int r = 0;
  double offdiag_residual = 0.0;  // largest leak outside the leading block
};

KernelSplit split_common_kernel(const StructuredTuple& t,
                                const Tolerance& tol = {});

}  // namespace dhdist
