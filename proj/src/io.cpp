#include "dhdist/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dhdist {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw ValidationError("matrix payload must be a nonempty array of rows");
  const Index rows = static_cast<Index>(j.size());
  if (!j[0].is_array())
    throw ValidationError("matrix payload rows must be arrays");
  const Index cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw ValidationError("matrix payload rows have inconsistent lengths");
    for (Index c = 0; c < cols; ++c)
      m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Matrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix market file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("empty matrix market file: " + path);
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw ValidationError("not a matrix market file: " + path);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer" && field != "double")
    throw ValidationError("matrix market: only real entries are supported");

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  Index rows = 0, cols = 0;
  long long entries = 0;
  if (format == "array") {
    sizes >> rows >> cols;
    Matrix m = Matrix::Zero(rows, cols);
    auto next = [&in]() {
      double value;
      if (!(in >> value))
        throw ValidationError("matrix market: truncated array data");
      return value;
    };
    if (symmetry == "symmetric") {
      // packed lower triangle, column-major
      for (Index j = 0; j < cols; ++j)
        for (Index i = j; i < rows; ++i) m(i, j) = m(j, i) = next();
    } else if (symmetry == "skew-symmetric") {
      // packed strictly lower triangle
      for (Index j = 0; j < cols; ++j)
        for (Index i = j + 1; i < rows; ++i) {
          m(i, j) = next();
          m(j, i) = -m(i, j);
        }
    } else {
      for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = next();
    }
    return m;
  }
  if (format != "coordinate")
    throw ValidationError("matrix market: unknown format " + format);
  sizes >> rows >> cols >> entries;
  Matrix m = Matrix::Zero(rows, cols);
  for (long long e = 0; e < entries; ++e) {
    Index i, j;
    double value;
    if (!(in >> i >> j >> value))
      throw ValidationError("matrix market: truncated coordinate data");
    m(i - 1, j - 1) = value;
    if (symmetry == "symmetric" && i != j) m(j - 1, i - 1) = value;
    if (symmetry == "skew-symmetric" && i != j) m(j - 1, i - 1) = -value;
  }
  return m;
}

ProblemFile problem_from_json(const json& doc, const std::string& base_dir) {
  ProblemFile f;
  if (!doc.contains("kind"))
    throw ValidationError("problem file: missing \"kind\"");
  f.kind = problem_kind_from_string(doc.at("kind").get<std::string>());
  if (doc.contains("grade")) f.grade = doc.at("grade").get<int>();
  if (doc.contains("skew_index"))
    f.skew_index = doc.at("skew_index").get<int>();
  if (doc.contains("matrices")) {
    for (const auto& [name, payload] : doc.at("matrices").items())
      f.matrices[name] = matrix_from_json(payload);
  }
  if (doc.contains("matrices_mm")) {
    for (const auto& [name, payload] : doc.at("matrices_mm").items()) {
      std::filesystem::path p = payload.get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      f.matrices[name] = read_matrix_market(p.string());
    }
  }
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (t.contains("rank_rel")) f.tolerances.rank_rel = t.at("rank_rel");
    if (t.contains("psd_rel")) f.tolerances.psd_rel = t.at("psd_rel");
    if (t.contains("residual_abs"))
      f.tolerances.residual_abs = t.at("residual_abs");
    f.tolerances.validate();
    f.has_tolerances = true;
  }
  if (f.matrices.empty())
    throw ValidationError("problem file: no matrices given");
  return f;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open problem file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("problem file is not valid JSON: ") +
                          err.what());
  }
  return problem_from_json(doc,
                           std::filesystem::path(path).parent_path().string());
}

json problem_to_json(const ProblemFile& f) {
  json doc;
  doc["kind"] = to_string(f.kind);
  if (f.grade >= 0) doc["grade"] = f.grade;
  if (f.skew_index >= 0) doc["skew_index"] = f.skew_index;
  json matrices;
  for (const auto& [name, m] : f.matrices) matrices[name] = matrix_to_json(m);
  doc["matrices"] = std::move(matrices);
  if (f.has_tolerances) {
    doc["tolerances"] = {{"rank_rel", f.tolerances.rank_rel},
                         {"psd_rel", f.tolerances.psd_rel},
                         {"residual_abs", f.tolerances.residual_abs}};
  }
  return doc;
}

void save_problem(const ProblemFile& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write problem file: " + path);
  out << problem_to_json(f).dump(2) << "\n";
}

json distance_report(const DistanceResult& r, const std::string& kind) {
  json report;
  report["report_version"] = 1;
  report["kind"] = kind;
  report["distance"] = r.distance;
  report["lower_bound"] = r.lower_bound;
  report["upper_bound"] = r.upper_bound;
  report["objective_value"] = r.objective_value;
  report["converged"] = r.converged;
  report["starts_used"] = r.starts_used;
  report["iterations"] = r.iterations;
  report["gradient_norm"] = r.gradient_norm;
  json minimizer = json::array();
  for (Index i = 0; i < r.minimizer.size(); ++i)
    minimizer.push_back(r.minimizer(i));
  report["minimizer"] = std::move(minimizer);
  json norms;
  norms["delta_J"] = r.certificate.delta_J.norm();
  for (std::size_t i = 0; i < r.certificate.delta_Xs.size(); ++i)
    norms["delta_X" + std::to_string(i)] = r.certificate.delta_Xs[i].norm();
  report["perturbation_norms"] = std::move(norms);
  report["certificate_norm"] = r.certificate.total_norm;
  report["skew_norm_sq_squared_form"] = r.certificate.skew_norm_sq_squared_form;
  report["skew_norm_sq_printed_form"] = r.certificate.skew_norm_sq_printed_form;
  return report;
}

}  // namespace dhdist
