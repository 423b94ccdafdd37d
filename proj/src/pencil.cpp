#include "dhdist/pencil.hpp"

#include "dhdist/rng.hpp"

#include <algorithm>
#include <cmath>

namespace dhdist {

const char* to_string(PencilIndexClass c) {
  switch (c) {
    case PencilIndexClass::index_le_one: return "index <= 1";
    case PencilIndexClass::index_two_closure: return "index-two closure";
    case PencilIndexClass::regular_index_two: return "regular index two";
    case PencilIndexClass::singular: return "singular";
  }
  return "?";
}

DistanceResult d_sing(const DHPencil& p, const OptimizerConfig& cfg,
                      const Tolerance& tol) {
  return minimize_sphere(tuple_from_pencil_sing(p), cfg, tol);
}

DistanceResult d_hi_inst(const DHPencil& p, const OptimizerConfig& cfg,
                         const Tolerance& tol) {
  return minimize_sphere(tuple_from_pencil_hi(p), cfg, tol);
}

bool pencil_singular_sampled(const Matrix& e, const Matrix& a,
                             const Tolerance& tol, int samples,
                             std::uint64_t seed) {
  require_square(e, "pencil_singular_sampled");
  const Index n = e.rows();
  if (samples <= 0) samples = static_cast<int>(std::max<Index>(5, n + 1));
  Rng rng(seed);
  const double scale = std::max(e.norm(), a.norm());
  if (scale == 0.0) return true;
  for (int s = 0; s < samples; ++s) {
    double lambda = rng.uniform(-2.0, 2.0);
    if (std::abs(lambda) < 0.05) lambda += 0.5;  // stay away from 0
    const Matrix value = lambda * e - a;
    const double sigma = min_singular_value(value);
    if (sigma > tol.rank_factor(n, n) * std::max(1.0, value.norm()) * 10.0)
      return false;  // full rank at one point: regular
  }
  return true;
}

PencilClassification classify(const DHPencil& p, const Tolerance& tol) {
  const Index n = p.dim();
  PencilClassification c;

  const CommonKernelReport jer =
      common_kernel_check(tuple_from_pencil_sing(p), tol);
  const CommonKernelReport er =
      common_kernel_check(tuple_from_pencil_hi(p), tol);
  c.common_kernel_JER = jer.kernel;
  c.common_kernel_ER = er.kernel;
  c.is_singular = jer.has_common_kernel;

  // independent oracle: rank of lambda E - (J - R) at sample points
  const bool singular_by_rank = pencil_singular_sampled(p.E(), p.lhs(), tol);
  if (singular_by_rank != c.is_singular)
    throw NumericalAmbiguity(
        "classify: kernel characterization and sampled ranks disagree on "
        "singularity");

  if (c.is_singular) {
    c.index_class = PencilIndexClass::singular;
    return c;
  }

  // constructive regular-index-two test: split ker E first
  const auto [u1, p_rank] = psd_range_kernel_split(p.E(), tol);
  c.rank_log.push_back(rank_decision(p.E(), tol, "rank E"));
  if (p_rank == n) {
    c.index_class = PencilIndexClass::index_le_one;  // E invertible: index 0
    return c;
  }

  const Index m = n - p_rank;  // dimension of ker E
  const Matrix jt = u1.transpose() * p.J() * u1;
  const Matrix rt = u1.transpose() * p.R() * u1;
  const Matrix j_tail = jt.bottomRightCorner(m, m);
  const Matrix r_tail = 0.5 * (rt.bottomRightCorner(m, m) +
                               rt.bottomRightCorner(m, m).transpose());

  // split the common kernel of the trailing (J, R) blocks
  const StructuredTuple tail(j_tail, {r_tail}, tol);
  const KernelSplit tail_split = split_common_kernel(tail, tol);
  const int r = tail_split.r;
  c.rank_log.push_back(
      rank_decision(-j_tail + r_tail, tol, "rank(-J22 + R22)"));

  if (r == 0) {
    // trailing J - R invertible: regular of index one; the pencil can still
    // sit on the boundary of the index-two set when E and R share a kernel
    c.index_class = er.has_common_kernel
                        ? PencilIndexClass::index_two_closure
                        : PencilIndexClass::index_le_one;
    return c;
  }

  // coupling block between range(E) and the trailing common kernel
  if (p_rank == 0) {
    // E = 0 and the trailing kernel is a common kernel of the whole pencil,
    // which contradicts regularity established above
    throw NumericalAmbiguity(
        "classify: inconsistent rank decisions for a zero E pencil");
  }
  const Matrix w = u1.rightCols(m) * tail_split.U.rightCols(r);
  const Matrix j13 = u1.leftCols(p_rank).transpose() * p.J() * w;
  const RankDecision j13_rank = rank_decision(j13, tol, "rank J13");
  c.rank_log.push_back(j13_rank);
  if (j13_rank.rank == r) {
    c.index_class = PencilIndexClass::regular_index_two;
  } else {
    // a column of the coupling block vanishing would mean a common kernel,
    // contradicting the singularity decision above
    throw NumericalAmbiguity(
        "classify: coupling block rank contradicts the singularity test");
  }
  return c;
}

CorollaryBounds corollary_bounds(const DHPencil& p, double d_hi) {
  CorollaryBounds b;
  const Matrix jtj = p.J().transpose() * p.J();
  const SymEig eig = sym_eig(jtj);
  b.lower_sq = 2.0 * std::max(eig.values(0), 0.0) + d_hi * d_hi;
  const double fro = p.J().norm();
  b.upper_sq = 2.0 * fro * fro + d_hi * d_hi;
  const double spec = eig.values(eig.values.size() - 1);
  b.upper_sq_spectral = 2.0 * std::max(spec, 0.0) + d_hi * d_hi;
  return b;
}

ReversalReport reversal_identities(const DHPencil& p,
                                   const OptimizerConfig& cfg,
                                   const Tolerance& tol) {
  ReversalReport report;
  report.order_er =
      minimize_sphere(StructuredTuple(p.J(), {p.E(), p.R()}, tol), cfg, tol);
  report.order_re =
      minimize_sphere(StructuredTuple(p.J(), {p.R(), p.E()}, tol), cfg, tol);
  report.discrepancy =
      std::abs(report.order_er.distance - report.order_re.distance);
  return report;
}

std::pair<double, double> unstructured_comparison(const DHPencil& p) {
  const Index n = p.dim();
  const Matrix a = p.lhs();
  Matrix stacked(2 * n, n);
  stacked.topRows(n) = a;
  stacked.bottomRows(n) = p.E();
  Matrix side(n, 2 * n);
  side.leftCols(n) = a;
  side.rightCols(n) = p.E();
  return {min_singular_value(stacked), min_singular_value(side)};
}

}  // namespace dhdist
