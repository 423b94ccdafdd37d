#pragma once

#include "dhdist/ckdistance.hpp"
#include "dhdist/structures.hpp"

#include <utility>
#include <vector>

namespace dhdist {

enum class PencilIndexClass {
  index_le_one,       // regular with index 0 or 1, nothing degenerate nearby
  index_two_closure,  // ker E cap ker R nontrivial but not index two itself
  regular_index_two,
  singular
};

const char* to_string(PencilIndexClass c);

struct PencilClassification {
  bool is_singular = false;
  PencilIndexClass index_class = PencilIndexClass::index_le_one;
  Matrix common_kernel_JER;  // basis, possibly 0 columns
  Matrix common_kernel_ER;
  std::vector<RankDecision> rank_log;
};

/// Structured distance to singularity: the common-kernel distance of
/// (J, [E, R]).  The certificate perturbation keeps E, R PSD and J skew and
/// makes the pencil singular.
DistanceResult d_sing(const DHPencil& p, const OptimizerConfig& cfg = {},
                      const Tolerance& tol = {});

/// Structured distance to the nearest high-index problem, which coincides
/// with the structured distance to instability: the common-kernel distance
/// of (0, [E, R]).
DistanceResult d_hi_inst(const DHPencil& p, const OptimizerConfig& cfg = {},
                         const Tolerance& tol = {});

/// Classification by kernel intersections plus the constructive
/// regular-index-two test (split ker E, split the trailing (J, R) blocks,
/// then check the coupling block for full column rank).  The structured
/// characterization is cross-checked against ranks of the pencil at sample
/// points; disagreement throws NumericalAmbiguity.
PencilClassification classify(const DHPencil& p, const Tolerance& tol = {});

/// Interval for d_sing^2 derived from d_hi:
///   2 lambda_min(-J^2) + d_hi^2 <= d_sing^2 <= 2 |J|^2 + d_hi^2.
/// The |J| term uses the Frobenius norm; the spectral-norm variant of the
/// upper bound (which is tighter) is reported alongside.
struct CorollaryBounds {
  double lower_sq = 0.0;
  double upper_sq = 0.0;           // Frobenius reading
  double upper_sq_spectral = 0.0;  // spectral-norm reading
};

CorollaryBounds corollary_bounds(const DHPencil& p, double d_hi);

/// The common-kernel distance of (J, [E, R]) is symmetric in E and R; this
/// computes both orderings (the swap realizes lambda R - (J - E)) and
/// reports them together with their discrepancy.
struct ReversalReport {
  DistanceResult order_er;  // tuple (J, [E, R])
  DistanceResult order_re;  // tuple (J, [R, E])
  double discrepancy = 0.0;
};

ReversalReport reversal_identities(const DHPencil& p,
                                   const OptimizerConfig& cfg = {},
                                   const Tolerance& tol = {});

/// Unstructured comparison values for A = J - R:
/// (sigma_min([A; E]), sigma_min([A, E])).
std::pair<double, double> unstructured_comparison(const DHPencil& p);

/// True iff rank(lambda E - A) < n at `samples` deterministic pseudo-random
/// points; an exact criterion for singularity once samples > n.
bool pencil_singular_sampled(const Matrix& e, const Matrix& a,
                             const Tolerance& tol = {}, int samples = 0,
                             std::uint64_t seed = 7777);

}  // namespace dhdist
