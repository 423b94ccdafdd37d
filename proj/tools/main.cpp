// Command-line front end: structured distances, classification, certificate
// perturbations, linearizations, Q removal, generators and fixtures.
//
// Exit codes: 0 success, 1 validation failure (input not in the structure
// class), 2 numerical ambiguity (a rank decision within 10x of threshold or
// disagreeing characterizations), 3 internal error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dhdist/ckdistance.hpp"
#include "dhdist/generators.hpp"
#include "dhdist/io.hpp"
#include "dhdist/pencil.hpp"
#include "dhdist/polynomial.hpp"
#include "dhdist/qreduction.hpp"
#include "dhdist/quadratic.hpp"

#include <iostream>
#include <optional>
#include <string>

namespace {

using dhdist::DistanceResult;
using dhdist::Matrix;
using dhdist::ProblemFile;
using dhdist::ProblemKind;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitAmbiguous = 2;
constexpr int kExitInternal = 3;

struct GlobalOptions {
  double tol_rank = 0.0;
  int starts = 16;
  std::uint64_t seed = 20240913;
  bool as_json = false;
  std::string input_file;
  std::string fixture_name;
  double fixture_eps = 1e-2;

  dhdist::Tolerance tolerance(const ProblemFile& f) const {
    dhdist::Tolerance t = f.has_tolerances ? f.tolerances : dhdist::Tolerance{};
    if (tol_rank > 0.0) t.rank_rel = tol_rank;
    return t;
  }

  dhdist::OptimizerConfig optimizer() const {
    dhdist::OptimizerConfig cfg;
    cfg.num_random_starts = starts;
    cfg.rng_seed = seed;
    return cfg;
  }

  ProblemFile load() const {
    if (!fixture_name.empty()) return dhdist::fixture(fixture_name, fixture_eps);
    if (input_file.empty())
      throw dhdist::ValidationError("no input: pass a file or --fixture");
    return dhdist::load_problem(input_file);
  }
};

void add_input_options(CLI::App* cmd, GlobalOptions& opts) {
  cmd->add_option("file", opts.input_file, "problem file (JSON)");
  cmd->add_option("--fixture", opts.fixture_name,
                  "use a named fixture instead of a file");
  cmd->add_option("--eps", opts.fixture_eps, "parameter for fixture families");
}

void emit(const json& report, const GlobalOptions& opts,
          const std::string& plain) {
  if (opts.as_json)
    std::cout << report.dump(2) << std::endl;
  else
    std::cout << plain << std::flush;
}

bool any_ambiguous(const std::vector<dhdist::RankDecision>& log) {
  for (const auto& d : log)
    if (d.ambiguous) return true;
  return false;
}

int run_distance(const GlobalOptions& opts, const std::string& kind) {
  const ProblemFile f = opts.load();
  const dhdist::Tolerance tol = opts.tolerance(f);
  const dhdist::OptimizerConfig cfg = opts.optimizer();
  json report;
  std::string plain;

  auto describe = [](const DistanceResult& r, const std::string& name) {
    std::ostringstream os;
    os << name << " = " << r.distance << "  (bounds [" << r.lower_bound
       << ", " << r.upper_bound << "], converged " << std::boolalpha
       << r.converged << ")\n";
    return os.str();
  };

  switch (f.kind) {
    case ProblemKind::tuple: {
      const DistanceResult r = minimize_sphere(f.to_tuple(), cfg, tol);
      report = dhdist::distance_report(r, "ck");
      plain = describe(r, "d_ck");
      break;
    }
    case ProblemKind::rlc:
    case ProblemKind::pencil: {
      const dhdist::DHPencil p = f.kind == ProblemKind::rlc
                                     ? dhdist::rlc_assemble(f.to_rlc(), tol)
                                     : f.to_pencil();
      if (kind == "sing") {
        const DistanceResult r = dhdist::d_sing(p, cfg, tol);
        report = dhdist::distance_report(r, "sing");
        plain = describe(r, "d_sing");
      } else {
        const DistanceResult r = dhdist::d_hi_inst(p, cfg, tol);
        report = dhdist::distance_report(r, kind);
        plain = describe(r, kind == "hi" ? "d_hi" : "d_inst");
      }
      break;
    }
    case ProblemKind::polynomial: {
      const dhdist::StructuredPolynomial p = f.to_polynomial();
      if (kind == "sing") {
        const DistanceResult r = dhdist::d_sing_poly(p, cfg, tol);
        report = dhdist::distance_report(r, "sing");
        plain = describe(r, "d_sing");
      } else if (kind == "hi") {
        const auto r = dhdist::d_hi_poly(p, cfg, tol, true);
        if (!r) {
          report = {{"report_version", 1},
                    {"kind", "hi"},
                    {"distance", "infinity"},
                    {"reason", "no higher-index polynomial exists in this "
                               "class (grade/skew-index combination)"}};
          plain = "d_hi = infinity (empty target set)\n";
        } else {
          report = dhdist::distance_report(*r, "hi");
          plain = describe(*r, "d_hi");
        }
      } else {
        throw dhdist::ValidationError(
            "distance --kind inst is defined for pencils and quadratics only");
      }
      break;
    }
    case ProblemKind::quadratic: {
      const dhdist::DHQuadratic q = f.to_quadratic();
      const dhdist::QuadraticDistanceBundle b =
          dhdist::quadratic_distances(q, cfg, tol);
      const DistanceResult& r =
          kind == "sing" ? b.d_sing : (kind == "hi" ? b.d_hi : b.d_inst);
      report = dhdist::distance_report(r, kind);
      if (kind == "inst")
        report["branch"] =
            b.inst_branch == dhdist::QuadraticDistanceBundle::InstBranch::md
                ? "MD"
                : "DK";
      plain = describe(r, "d_" + kind);
      break;
    }
    case ProblemKind::general_q:
      throw dhdist::ValidationError(
          "distances for general-Q systems are not characterized; run "
          "reduce-q first");
  }
  emit(report, opts, plain);
  return kExitOk;
}

int run_classify(const GlobalOptions& opts) {
  const ProblemFile f = opts.load();
  const dhdist::Tolerance tol = opts.tolerance(f);
  dhdist::DHPencil p = f.kind == ProblemKind::rlc
                           ? dhdist::rlc_assemble(f.to_rlc(), tol)
                           : f.to_pencil();
  const dhdist::PencilClassification c = dhdist::classify(p, tol);
  json report = {{"report_version", 1},
                 {"is_singular", c.is_singular},
                 {"index_class", dhdist::to_string(c.index_class)},
                 {"kernel_dim_JER", c.common_kernel_JER.cols()},
                 {"kernel_dim_ER", c.common_kernel_ER.cols()}};
  json ranks = json::array();
  for (const auto& d : c.rank_log)
    ranks.push_back({{"what", d.what},
                     {"rank", d.rank},
                     {"threshold", d.threshold},
                     {"sigma_kept", d.sigma_kept},
                     {"sigma_dropped", d.sigma_dropped},
                     {"ambiguous", d.ambiguous}});
  report["rank_decisions"] = std::move(ranks);
  std::ostringstream plain;
  plain << "classification: " << dhdist::to_string(c.index_class)
        << (c.is_singular ? " (singular)" : " (regular)") << "\n";
  emit(report, opts, plain.str());
  return any_ambiguous(c.rank_log) ? kExitAmbiguous : kExitOk;
}

int run_perturb(const GlobalOptions& opts, const std::string& kind,
                const std::string& out) {
  const ProblemFile f = opts.load();
  const dhdist::Tolerance tol = opts.tolerance(f);
  const dhdist::OptimizerConfig cfg = opts.optimizer();

  ProblemFile perturbed = f;
  json report;
  auto apply_tuple = [&](const dhdist::StructuredTuple& t) {
    const DistanceResult r = minimize_sphere(t, cfg, tol);
    const dhdist::StructuredTuple moved =
        apply_perturbation(t, r.certificate, tol);
    return std::make_pair(r, moved);
  };

  switch (f.kind) {
    case ProblemKind::tuple: {
      auto [r, moved] = apply_tuple(f.to_tuple());
      perturbed = ProblemFile::from_tuple(moved);
      report = dhdist::distance_report(r, kind);
      break;
    }
    case ProblemKind::rlc:
    case ProblemKind::pencil: {
      const dhdist::DHPencil p = f.kind == ProblemKind::rlc
                                     ? dhdist::rlc_assemble(f.to_rlc(), tol)
                                     : f.to_pencil();
      const bool sing = kind == "sing";
      auto [r, moved] = apply_tuple(sing ? tuple_from_pencil_sing(p)
                                         : tuple_from_pencil_hi(p));
      const Matrix j_new = sing ? moved.J() : p.J();
      perturbed =
          ProblemFile::from_pencil(dhdist::DHPencil(moved.X(0), j_new,
                                                    moved.X(1), tol));
      report = dhdist::distance_report(r, kind);
      break;
    }
    case ProblemKind::quadratic: {
      const dhdist::DHQuadratic q = f.to_quadratic();
      const dhdist::QuadraticDistanceBundle b =
          dhdist::quadratic_distances(q, cfg, tol);
      const dhdist::QuadraticDistanceKind which =
          kind == "sing" ? dhdist::QuadraticDistanceKind::sing
                         : (kind == "hi" ? dhdist::QuadraticDistanceKind::hi
                                         : dhdist::QuadraticDistanceKind::inst);
      const dhdist::QuadraticPerturbation qp =
          quadratic_certificate(q, b, which);
      perturbed = ProblemFile::from_quadratic(
          dhdist::DHQuadratic(q.M() + qp.dM, q.G() + qp.dG, q.D() + qp.dD,
                              q.K() + qp.dK, tol));
      report = dhdist::distance_report(
          which == dhdist::QuadraticDistanceKind::sing
              ? b.d_sing
              : (which == dhdist::QuadraticDistanceKind::hi ? b.d_hi
                                                            : b.d_inst),
          kind);
      break;
    }
    default:
      throw dhdist::ValidationError(
          "perturb: supported kinds are tuple, pencil, rlc, quadratic");
  }
  dhdist::save_problem(perturbed, out);
  report["output_file"] = out;
  emit(report, opts,
       "certificate perturbation applied; perturbed problem written to " +
           out + "\n");
  return kExitOk;
}

int run_reduce_q(const GlobalOptions& opts, const std::string& out) {
  const ProblemFile f = opts.load();
  const dhdist::Tolerance tol = opts.tolerance(f);
  if (f.kind != ProblemKind::general_q)
    throw dhdist::ValidationError("reduce-q expects a general_q problem");
  const dhdist::GeneralDHSystem s = f.to_general();
  const dhdist::ReductionReport r = dhdist::remove_q_singular(s, tol);
  json report = {{"report_version", 1},
                 {"eliminated_dim", r.eliminated_dim},
                 {"e22_condition", r.e22_condition},
                 {"ill_conditioned", r.ill_conditioned}};
  if (r.original_index)
    report["original_index"] = r.original_index->index;
  if (r.reduced_index) report["reduced_index"] = r.reduced_index->index;
  if (!out.empty()) {
    dhdist::save_problem(ProblemFile::from_pencil(r.reduced), out);
    report["output_file"] = out;
  }
  std::ostringstream plain;
  plain << "reduced to dimension " << r.reduced.dim() << " (eliminated "
        << r.eliminated_dim << ", cond(E22) = " << r.e22_condition << ")\n";
  emit(report, opts, plain.str());
  return kExitOk;
}

int run_linearize(const GlobalOptions& opts, const std::string& form,
                  const std::string& out) {
  const ProblemFile f = opts.load();
  const dhdist::Tolerance tol = opts.tolerance(f);
  json report = {{"report_version", 1}, {"form", form}};
  ProblemFile produced;
  if (form == "companion") {
    const dhdist::StructuredPolynomial p =
        f.kind == ProblemKind::quadratic
            ? polynomial_from_quadratic(f.to_quadratic())
            : (f.kind == ProblemKind::pencil
                   ? polynomial_from_pencil(f.to_pencil())
                   : f.to_polynomial());
    const dhdist::CompanionPencil cp = companion(p);
    report["block_dim"] = cp.E_block.rows();
    report["E"] = dhdist::matrix_to_json(cp.E_block);
    report["A"] = dhdist::matrix_to_json(cp.A_block);
    const dhdist::IndexReport idx = numeric_index(cp, tol);
    report["is_regular"] = idx.is_regular;
    if (idx.is_regular) {
      report["index"] = idx.index;
      report["infinite_multiplicity"] = idx.infinite_multiplicity;
    }
    if (!out.empty()) {
      std::ofstream of(out);
      of << report.dump(2) << "\n";
    }
    emit(report, opts,
         "companion pencil of block dimension " +
             std::to_string(cp.E_block.rows()) + "\n");
    return kExitOk;
  }
  if (form == "dh") {
    produced = ProblemFile::from_general(dh_linearize(f.to_quadratic()));
  } else if (form == "trimmed") {
    produced = ProblemFile::from_pencil(trim_linearize(f.to_quadratic(), tol));
    const dhdist::TrimmedBounds b = trimmed_bounds(f.to_quadratic(), tol);
    report["sing_upper"] = b.sing_upper;
    report["sing_upper_certified"] = b.sing_upper_certified;
    report["hi_lower"] = b.hi_lower;
    report["hi_upper"] = b.hi_upper;
    if (b.sing_lower_if_g0) report["sing_lower_if_g0"] = *b.sing_lower_if_g0;
  } else {
    throw dhdist::ValidationError("linearize: unknown form " + form);
  }
  if (!out.empty()) {
    dhdist::save_problem(produced, out);
    report["output_file"] = out;
  } else {
    report["problem"] = dhdist::problem_to_json(produced);
  }
  emit(report, opts, "linearization of kind '" + form + "' produced\n");
  return kExitOk;
}

int run_rlc(const GlobalOptions& opts, const std::string& out) {
  const ProblemFile f = opts.load();
  const dhdist::Tolerance tol = opts.tolerance(f);
  const dhdist::RLCTopology t = f.to_rlc();
  const dhdist::RLCRegularity reg = rlc_regularity(t, tol);
  const dhdist::DHPencil p = rlc_assemble(t, tol);
  const auto [block1, block2] = rlc_block_lambda_mins(t, tol);
  json report = {{"report_version", 1},
                 {"regular", reg.regular},
                 {"gv_full_column_rank", reg.gv_full_column_rank},
                 {"g1_full_row_rank", reg.g1_full_row_rank},
                 {"state_dim", p.dim()},
                 {"block_lambda_min_nodes", block1},
                 {"block_lambda_min_currents", block2}};
  if (!out.empty()) {
    dhdist::save_problem(ProblemFile::from_pencil(p), out);
    report["output_file"] = out;
  }
  std::ostringstream plain;
  plain << "RLC pencil: dim " << p.dim() << ", "
        << (reg.regular ? "regular" : "singular")
        << "; lambda_min bound = " << std::min(block1, block2) << "\n";
  emit(report, opts, plain.str());
  bool ambiguous = reg.gv_rank.ambiguous || reg.g1_rank.ambiguous;
  return ambiguous ? kExitAmbiguous : kExitOk;
}

int run_gen(const GlobalOptions& opts, const std::string& kind, int n,
            int rank_deficiency, const std::string& out) {
  const ProblemFile f = dhdist::random_instance(
      n, dhdist::problem_kind_from_string(kind), opts.seed, rank_deficiency);
  if (out.empty()) {
    std::cout << dhdist::problem_to_json(f).dump(2) << std::endl;
  } else {
    dhdist::save_problem(f, out);
    emit({{"report_version", 1}, {"output_file", out}}, opts,
         "instance written to " + out + "\n");
  }
  return kExitOk;
}

int run_fixture(const GlobalOptions& opts, const std::string& name,
                const std::string& out) {
  const ProblemFile f = dhdist::fixture(name, opts.fixture_eps);
  if (out.empty()) {
    std::cout << dhdist::problem_to_json(f).dump(2) << std::endl;
  } else {
    dhdist::save_problem(f, out);
    emit({{"report_version", 1}, {"output_file", out}}, opts,
         "fixture written to " + out + "\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "structured distances (singularity, high index, instability) for "
      "dissipative Hamiltonian pencils and matrix polynomials"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--tol-rank", opts.tol_rank,
                 "relative rank threshold override");
  app.add_option("--starts", opts.starts, "number of random optimizer starts");
  app.add_option("--seed", opts.seed, "random seed");
  app.add_flag("--json", opts.as_json, "machine-readable report on stdout");

  std::string kind = "sing", out, form = "companion", gen_kind = "pencil";
  std::string fixture_name;
  int gen_n = 4, rank_deficiency = 0;

  CLI::App* distance = app.add_subcommand("distance", "structured distances");
  distance->add_option("--kind", kind, "sing | hi | inst")
      ->check(CLI::IsMember({"sing", "hi", "inst"}));
  add_input_options(distance, opts);

  CLI::App* classify = app.add_subcommand("classify", "regularity and index");
  add_input_options(classify, opts);

  CLI::App* perturb =
      app.add_subcommand("perturb", "emit the certificate perturbation");
  perturb->add_option("--kind", kind, "sing | hi | inst")
      ->check(CLI::IsMember({"sing", "hi", "inst"}));
  perturb->add_option("--out", out, "output problem file")->required();
  add_input_options(perturb, opts);

  CLI::App* reduceq =
      app.add_subcommand("reduce-q", "remove the right coefficient Q");
  reduceq->add_option("--out", out, "output pencil file");
  add_input_options(reduceq, opts);

  CLI::App* linearize = app.add_subcommand("linearize", "build linearizations");
  linearize->add_option("form", form, "companion | dh | trimmed")
      ->check(CLI::IsMember({"companion", "dh", "trimmed"}));
  linearize->add_option("--out", out, "output file");
  add_input_options(linearize, opts);

  CLI::App* rlc = app.add_subcommand("rlc", "assemble an RLC network pencil");
  rlc->add_option("--topology", opts.input_file, "topology file")->required();
  rlc->add_option("--out", out, "write the assembled pencil");

  CLI::App* gen = app.add_subcommand("gen", "random structured instances");
  gen->add_option("--kind", gen_kind, "problem kind");
  gen->add_option("--n", gen_n, "dimension");
  gen->add_option("--rank-deficient", rank_deficiency,
                  "inject kernel structure of this dimension");
  gen->add_option("--out", out, "output file");

  CLI::App* fix = app.add_subcommand("fixture", "named fixture instances");
  fix->add_option("name", fixture_name, "fixture name")->required();
  fix->add_option("--eps", opts.fixture_eps, "family parameter");
  fix->add_option("--out", out, "output file");

  for (CLI::App* sub : app.get_subcommands({}))
    sub->fallthrough();  // let --json/--seed/... appear after the subcommand

  CLI11_PARSE(app, argc, argv);

  try {
    if (distance->parsed()) return run_distance(opts, kind);
    if (classify->parsed()) return run_classify(opts);
    if (perturb->parsed()) return run_perturb(opts, kind, out);
    if (reduceq->parsed()) return run_reduce_q(opts, out);
    if (linearize->parsed()) return run_linearize(opts, form, out);
    if (rlc->parsed()) return run_rlc(opts, out);
    if (gen->parsed())
      return run_gen(opts, gen_kind, gen_n, rank_deficiency, out);
    if (fix->parsed()) return run_fixture(opts, fixture_name, out);
  } catch (const dhdist::ValidationError& err) {
    std::cerr << "validation error: " << err.what() << std::endl;
    return kExitValidation;
  } catch (const dhdist::NumericalAmbiguity& err) {
    std::cerr << "numerical ambiguity: " << err.what() << std::endl;
    return kExitAmbiguous;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << std::endl;
    return kExitInternal;
  }
  return kExitInternal;
}
