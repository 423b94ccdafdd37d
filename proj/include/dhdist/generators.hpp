#pragma once

#include "dhdist/rng.hpp"
#include "dhdist/structures.hpp"
#include "dhdist/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace dhdist {

/// RLC network data: incidence blocks (one column per element, one row per
/// node) plus positive definite element matrices.  Element groups may be
/// empty (zero columns).
struct RLCTopology {
  Matrix Gc, Gl, Gr, Gv;  // capacitors, inductors, resistors, voltage sources
  Matrix C, L, Rr;        // positive definite element values

  Index nodes() const { return Gc.rows(); }

  void validate(const Tolerance& tol = {}) const;
};

/// Modified-nodal-analysis pencil of the network; state (V, I_l, I_v):
///   E = diag(Gc C Gc^T, L, 0)
///   J = [[0, -Gl, -Gv], [Gl^T, 0, 0], [Gv^T, 0, 0]]
///   R = diag(Gr Rr^{-1} Gr^T, 0, 0)
DHPencil rlc_assemble(const RLCTopology& t, const Tolerance& tol = {});

struct RLCRegularity {
  bool regular = false;
  bool gv_full_column_rank = false;
  bool g1_full_row_rank = false;  // G1 = [Gc Gr Gl Gv]
  RankDecision gv_rank;
  RankDecision g1_rank;
};

/// Rank-based regularity test: the pencil is regular iff Gv has full column
/// rank and [Gc Gr Gl Gv] has full row rank.
RLCRegularity rlc_regularity(const RLCTopology& t, const Tolerance& tol = {});

/// The two diagonal-block eigenvalue expressions whose minimum equals
/// lambda_min(-J^2 + R^2 + E^2) for the assembled pencil.
std::pair<double, double> rlc_block_lambda_mins(const RLCTopology& t,
                                                const Tolerance& tol = {});

enum class ProblemKind { tuple, pencil, polynomial, quadratic, general_q, rlc };

const char* to_string(ProblemKind k);
ProblemKind problem_kind_from_string(const std::string& s);

/// A problem instance as stored on disk: named matrices plus the scalar
/// attributes that the structured constructors need.
struct ProblemFile {
  ProblemKind kind = ProblemKind::pencil;
  std::map<std::string, Matrix> matrices;
  int grade = -1;
  int skew_index = -1;
  Tolerance tolerances;
  bool has_tolerances = false;

  const Matrix& matrix(const std::string& name) const;

  StructuredTuple to_tuple() const;
  DHPencil to_pencil() const;
  StructuredPolynomial to_polynomial() const;
  DHQuadratic to_quadratic() const;
  GeneralDHSystem to_general() const;
  RLCTopology to_rlc() const;

  static ProblemFile from_tuple(const StructuredTuple& t);
  static ProblemFile from_pencil(const DHPencil& p);
  static ProblemFile from_polynomial(const StructuredPolynomial& p);
  static ProblemFile from_quadratic(const DHQuadratic& q);
  static ProblemFile from_general(const GeneralDHSystem& s);
  static ProblemFile from_rlc(const RLCTopology& t);
};

/// Named fixtures.  `eps` parametrizes the families; it is ignored by the
/// fixed instances.
///   numeric1  : the 2x2 pencil with E = diag(0, 1), J = [[0,-0.5],[0.5,0]],
///               R = [[0.18, 0.42], [0.42, 1.03]]
///   ex42      : E = J = 0, R = I_2
///   ex51-eps  : the 5x5 pencil family with alpha = 5/eps + 1
///   rem49-eps : lambda diag(eps, 0) + diag(0, 1) as a grade-1 polynomial
///   cubic1    : the scalar polynomial lambda^3 + 1 at grade 3
ProblemFile fixture(const std::string& name, double eps = 1e-2);

/// Deterministic random structured instances.  PSD blocks are F^T F / n
/// for Gaussian F, optionally compressed to a given rank by zeroing
/// trailing eigenvalues; skew blocks are (B - B^T)/2.
Matrix random_psd(Rng& rng, Index n, int rank = -1);
Matrix random_skew(Rng& rng, Index n);
Matrix random_orthogonal(Rng& rng, Index n);

StructuredTuple random_tuple(Rng& rng, Index n, int num_x,
                             int common_kernel_dim = 0);
DHPencil random_pencil(Rng& rng, Index n, bool rank_deficient_e = false,
                       bool shared_er_kernel = false);
DHQuadratic random_quadratic(Rng& rng, Index n, int rank_k = -1);
GeneralDHSystem random_general(Rng& rng, Index n);
RLCTopology random_rlc(Rng& rng, Index nodes, Index nc, Index nl, Index nr,
                       Index nv, bool degenerate = false);

/// CLI-facing dispatcher; `rank_deficiency` > 0 injects kernel structure.
ProblemFile random_instance(Index n, ProblemKind kind, std::uint64_t seed,
                            int rank_deficiency = 0);

}  // namespace dhdist
