#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dhdist {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Input is not a member of the required structure class (wrong shape,
/// non-finite entries, symmetry/definiteness violated beyond tolerance).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A rank or kernel decision is too close to its threshold to be trusted,
/// or independent characterizations of the same quantity disagree.
class NumericalAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thresholds shared by all rank/kernel/definiteness decisions.
struct Tolerance {
  /// Relative singular-value cutoff for rank decisions.
  /// 0 means "use max(rows, cols) * machine epsilon".
  double rank_rel = 0.0;
  /// Relative slack for semidefiniteness and symmetry checks.
  double psd_rel = 1e-10;
  /// Absolute residual accepted for kernel membership certificates.
  double residual_abs = 1e-10;

  double rank_factor(Index rows, Index cols) const {
    if (rank_rel > 0.0) return rank_rel;
    return static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon();
  }

  void validate() const {
    if (rank_rel < 0.0 || psd_rel <= 0.0 || residual_abs <= 0.0)
      throw ValidationError("tolerances must be positive");
  }
};

/// Outcome of a single rank decision, kept for diagnostics.  `ambiguous` is
/// set when some singular value falls within a factor 10 of the threshold,
/// i.e. the decision could flip under a mild change of tolerance.
struct RankDecision {
  std::string what;
  int rank = 0;
  double threshold = 0.0;      // absolute cutoff used
  double sigma_kept = 0.0;     // smallest singular value counted as nonzero
  double sigma_dropped = 0.0;  // largest singular value counted as zero
  bool ambiguous = false;
};

inline void require_finite(const Matrix& x, const char* name) {
  if (!x.allFinite())
    throw ValidationError(std::string(name) + ": non-finite entries");
}

inline void require_square(const Matrix& x, const char* name) {
  if (x.rows() != x.cols())
    throw ValidationError(std::string(name) + ": expected a square matrix");
}

inline void require_nonempty(const Matrix& x, const char* name) {
  if (x.rows() == 0 || x.cols() == 0)
    throw ValidationError(std::string(name) + ": expected a nonempty matrix");
}

/// Frobenius-scale reference used by relative symmetry tests: max(1, |X|_F).
inline double norm_scale(const Matrix& x) {
  return std::max(1.0, x.norm());
}

}  // namespace dhdist
