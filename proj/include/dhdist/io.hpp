#pragma once

#include "dhdist/ckdistance.hpp"
#include "dhdist/generators.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace dhdist {

/// Reads a problem document.  Matrices are nested row arrays under
/// "matrices"; large payloads may instead be referenced by path under
/// "matrices_mm" (Matrix Market array or coordinate format), resolved
/// relative to the document's directory.
ProblemFile load_problem(const std::string& path);
ProblemFile problem_from_json(const nlohmann::json& doc,
                              const std::string& base_dir = ".");

void save_problem(const ProblemFile& file, const std::string& path);
nlohmann::json problem_to_json(const ProblemFile& file);

/// Matrix Market reader: "array" and "coordinate" formats, real entries,
/// with general / symmetric / skew-symmetric symmetry qualifiers.
Matrix read_matrix_market(const std::string& path);

/// Machine-readable report for a distance computation.  "report_version"
/// identifies the schema (currently 1).
nlohmann::json distance_report(const DistanceResult& result,
                               const std::string& kind);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace dhdist
