#pragma once

#include "dhdist/ckdistance.hpp"
#include "dhdist/polynomial.hpp"
#include "dhdist/structures.hpp"

#include <complex>
#include <vector>

namespace dhdist {

/// First-order form of the quadratic with a nontrivial right coefficient:
///   E = diag(M, I), J = [[G, I], [-I, 0]], R = diag(D, 0), Q = diag(I, K).
/// Satisfies the dissipative-Hamiltonian constraints E^T Q >= 0, J skew,
/// R >= 0 by construction, and is revalidated on return.
GeneralDHSystem dh_linearize(const DHQuadratic& q);

/// Spectral sanity report for a quadratic: eigenvalue locations, semisimple
/// structure on the imaginary axis, and Jordan chain lengths at zero and
/// infinity (both computed via companion indices, the zero case through the
/// reversal, which swaps M and K).
struct SpectralReport {
  bool is_regular = true;
  std::vector<std::complex<double>> eigenvalues;  // finite
  double max_real_part = 0.0;
  bool all_left_half_plane = true;
  bool imaginary_axis_semisimple = true;  // nonzero imaginary eigenvalues
  int index_at_infinity = 0;
  int index_at_zero = 0;
  bool jordan_lengths_ok = true;  // both indices <= 2

  struct Cluster {
    std::complex<double> value;
    int algebraic = 0;
    int geometric = 0;
    bool semisimple = false;
  };
  std::vector<Cluster> imaginary_clusters;
};

SpectralReport spectral_check(const DHQuadratic& q, const Tolerance& tol = {});

/// The three structured distances of a quadratic:
///   d_sing = d_ck(G, [M, D, K])
///   d_hi   = d_ck(0, [M, D])
///   d_inst = min( d_ck(0, [M, D]), d_ck(0, [D, K]) )
/// with their eigenvalue sandwiches.  The instability certificate perturbs
/// only the winning branch (Delta_K = 0 on the (M, D) branch and vice
/// versa); ties go to the (M, D) branch.
struct QuadraticDistanceBundle {
  DistanceResult d_sing;
  DistanceResult d_hi;
  DistanceResult d_inst;
  enum class InstBranch { md, dk } inst_branch = InstBranch::md;
};

QuadraticDistanceBundle quadratic_distances(const DHQuadratic& q,
                                            const OptimizerConfig& cfg = {},
                                            const Tolerance& tol = {});

/// Named coefficient perturbations (dM, dG, dD, dK) for one of the bundle's
/// distances, mapped back from the tuple-level certificate.
struct QuadraticPerturbation {
  Matrix dM, dG, dD, dK;
  Vector u;
  double total_norm = 0.0;
};

enum class QuadraticDistanceKind { sing, hi, inst };

QuadraticPerturbation quadratic_certificate(const DHQuadratic& q,
                                            const QuadraticDistanceBundle& b,
                                            QuadraticDistanceKind kind);

/// The reversal lambda^2 K + lambda (D - G) + M, which lies in the same
/// structure class with M and K exchanged.
DHQuadratic reversal(const DHQuadratic& q);

}  // namespace dhdist
