#include "substatic/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "substatic/curvature.hpp"
#include "substatic/errors.hpp"
#include "substatic/fem_solver.hpp"
#include "substatic/fields.hpp"
#include "substatic/identities.hpp"
#include "substatic/report.hpp"

namespace substatic {

namespace {

using nlohmann::json;

// Field checks: numeric divergence spacing as a fraction of the radial extent,
// and the agreement bound relative to the largest summand divergence.
constexpr double kFieldStepFraction = 1e-3;
constexpr double kFieldAgreement = 1e-7;
constexpr double kNonnegative = -1e-9;
constexpr unsigned kFieldSeed = 20260101u;

PlanarMesh make_mesh(const DomainShape& shape, int res) {
  switch (shape.kind) {
    case DomainShape::Kind::disk: return make_disk_mesh(shape.a, res);
    case DomainShape::Kind::ellipse: return make_ellipse_mesh(shape.a, shape.b, res);
    case DomainShape::Kind::square: return make_square_mesh(shape.a, res);
    default: break;
  }
  throw Error(ErrorCode::invalid_argument, "unsupported planar shape");
}

ModelSpec effective_model(const RunConfig& cfg) {
  if (cfg.problem.kind == Problem::Kind::radial) return cfg.problem.model;
  ModelSpec flat;
  flat.family = Family::flat;
  flat.dimension = 2;
  return flat;
}

double horizon_value(const WarpedGeometry& geom, const Problem& p) {
  if (p.domain.inner != RadialDomain::Inner::horizon) return 0.0;
  return p.auto_c ? compute_c(geom) : p.c_inner;
}

json model_section(const WarpedGeometry& geom, const RunConfig& cfg, Outcome& out) {
  const ConditionReport cond = check_brendle(geom, cfg.brendle_grid);
  json j = {{"family", to_string(geom.spec().family)},
            {"n", geom.dimension()},
            {"m", report::number(geom.spec().mass)},
            {"q", report::number(geom.spec().charge)},
            {"K", report::number(geom.spec().ambient_curvature)},
            {"conditions", report::to_json(cond)}};
  out.verdicts.push_back({"substatic", cond.substatic_ok});
  out.verdicts.push_back({"condition_implication", cond.implication_ok});
  if (geom.has_horizon()) {
    const HorizonData hd = horizon_data(geom);
    const HorizonPositivity hp = horizon_positivity(geom);
    const CDetails cd = compute_c_details(geom);
    j["horizon"] = report::to_json(hd);
    j["horizon_positivity"] = report::to_json(hp);
    j["c"] = report::to_json(cd);
    out.verdicts.push_back({"horizon_positivity", hp.positive});
    out.verdicts.push_back({"horizon_limit_oracle", hd.oracle_rel_diff <= 1e-6});
    out.verdicts.push_back({"c_forms_agree", cd.ratio_vs_closed <= 1e-8});
  }
  return j;
}

std::vector<std::string> selected(const RunConfig& cfg) {
  const bool fem = cfg.problem.kind == Problem::Kind::fem;
  std::vector<std::string> names;
  if (cfg.identities.empty()) {
    if (fem) names = {"magnanini_poggesi", "alexandrov", "heintze_karcher", "volume_balance"};
    else names = {"main_integral_identity", "alexandrov", "heintze_karcher", "volume_balance"};
    return names;
  }
  for (const auto& id : cfg.identities) {
    if (fem && id == "main_integral_identity") {
      throw Error(ErrorCode::invalid_argument, "main_integral_identity needs a radial problem");
    }
    if (!fem && id == "magnanini_poggesi") {
      throw Error(ErrorCode::invalid_argument, "magnanini_poggesi needs a fem problem");
    }
    names.push_back(id);
  }
  return names;
}

void apply_tolerance(IdentityReport& r, std::optional<double> tol) {
  if (!tol) return;
  r.tolerance = *tol;
  r.residual_ok = r.residual_rel <= *tol;
}

std::vector<IdentityReport> filter(const std::vector<IdentityReport>& all, const std::vector<std::string>& names,
                                   std::optional<double> tol, std::vector<std::string>& warnings) {
  std::vector<IdentityReport> out;
  for (const auto& name : names) {
    auto it = std::find_if(all.begin(), all.end(), [&](const IdentityReport& r) { return r.name == name; });
    if (it == all.end()) {
      warnings.push_back(name + " is not available for this problem (skipped)");
      continue;
    }
    out.push_back(*it);
    apply_tolerance(out.back(), tol);
  }
  return out;
}

struct RadialFieldCheck {
  std::vector<report::FieldRow> rows;
  double min_div = 0.0;
  double max_mismatch = 0.0;
  double scale = 0.0;
};

RadialFieldCheck field_check(const RadialSolution& sol, int points) {
  RadialFieldCheck fc;
  if (points == 0) return fc;
  const double a = sol.rho_inner(), b = sol.rho_outer();
  const double step = kFieldStepFraction * (b - a);
  std::mt19937_64 rng(kFieldSeed);
  std::uniform_real_distribution<double> dist(a + 3.0 * step, b - 3.0 * step);
  std::vector<double> rhos(points);
  for (double& r : rhos) r = dist(rng);
  std::sort(rhos.begin(), rhos.end());
  fc.min_div = std::numeric_limits<double>::infinity();
  for (double r : rhos) {
    report::FieldRow row;
    row.rho = r;
    row.coord = sol.geom.from_arclength(r);
    row.closed = div_X_closed(sol, r);
    // central differences at two spacings, combined to fourth order
    const NumericDivergence coarse = div_X_numeric_terms(sol, r, step);
    const NumericDivergence fine = div_X_numeric_terms(sol, r, 0.5 * step);
    row.div_numeric = (4.0 * fine.total - coarse.total) / 3.0;
    fc.min_div = std::min(fc.min_div, row.closed.div_closed);
    fc.max_mismatch = std::max(fc.max_mismatch, std::abs(row.closed.div_closed - row.div_numeric));
    for (double t : coarse.terms) fc.scale = std::max(fc.scale, std::abs(t));
    fc.rows.push_back(row);
  }
  return fc;
}

std::string solution_csv(const RadialSolution& sol) {
  std::string s = "coord,rho,u,du,d2u,residual\n";
  for (int i = 0; i < sol.nodes(); ++i) {
    s += report::fmt(sol.coord[i]) + "," + report::fmt(sol.rho[i]) + "," + report::fmt(sol.u[i]) + "," +
         report::fmt(sol.du[i]) + "," + report::fmt(sol.d2u[i]) + "," + report::fmt(sol.residual[i]) + "\n";
  }
  return s;
}

// Solve at the finest resolution and run the pointwise checks.
json solve_section(const WarpedGeometry& geom, const RunConfig& cfg, Outcome& out, std::vector<IdentityReport>* ids,
                   std::string* field_rows, std::string* solution_rows) {
  const Problem& p = cfg.problem;
  const int res = cfg.resolutions.back();
  json j;
  if (p.kind == Problem::Kind::radial) {
    const double c = horizon_value(geom, p);
    const RadialSolution sol = solve_radial(geom, p.domain, c, res);
    const Diagnostics d = hopf_positivity_check(sol);
    for (const auto& w : sol.warnings) out.warnings.push_back(w);
    j = {{"nodes", res},
         {"c_inner", report::number(c)},
         {"step", report::number(sol.step)},
         {"residual_max", report::number(sol.residual_max)},
         {"consistency_max", report::number(sol.consistency_max)},
         {"boundary_flux", report::number(sol.boundary_flux)},
         {"achieved_order", report::number(sol.achieved_order)},
         {"under_resolved", sol.under_resolved},
         {"diagnostics", report::to_json(d)}};
    out.verdicts.push_back({"positivity", d.positivity_ok});
    out.verdicts.push_back({"hopf", d.hopf_ok});

    const RadialFieldCheck fc = field_check(sol, cfg.field_points);
    if (!fc.rows.empty()) {
      const double rel = fc.max_mismatch / std::max(fc.scale, 1e-300);
      j["fields"] = {{"points", fc.rows.size()},
                     {"min_div_closed", report::number(fc.min_div)},
                     {"max_closed_vs_numeric", report::number(fc.max_mismatch)},
                     {"summand_scale", report::number(fc.scale)},
                     {"relative_mismatch", report::number(fc.scale > 0.0 ? rel : 0.0)}};
      out.verdicts.push_back({"div_nonnegative", fc.min_div >= kNonnegative});
      out.verdicts.push_back({"div_closed_vs_numeric", fc.scale == 0.0 || rel <= kFieldAgreement});
      if (field_rows) *field_rows = report::field_csv(fc.rows);
    }
    if (geom.is_space_form()) {
      const PFunctionReport pf = p_function(sol, geom.space_form_curvature());
      j["p_function"] = {{"K", report::number(pf.K)},
                         {"P_min", report::number(pf.P_min)},
                         {"P_max", report::number(pf.P_max)},
                         {"min_lap_P", report::number(pf.min_lap_P)},
                         {"max_div_mismatch", report::number(pf.max_div_mismatch)}};
    }
    if (solution_rows) *solution_rows = solution_csv(sol);
    if (ids && p.domain.inner != RadialDomain::Inner::radius) {
      *ids = {check_main_identity(geom, sol), check_alexandrov(geom, sol), check_volume_balance(geom, sol)};
      if (mean_curvature_slice(geom, p.domain.outer_coord) > 0.0) ids->push_back(check_heintze_karcher(geom, sol));
    }
  } else {
    const FemSolution sol = solve_flat_fem(make_mesh(p.shape, res));
    const Diagnostics d = hopf_positivity_check(sol);
    j = {{"rings", res},
         {"triangles", sol.mesh.triangles.size()},
         {"vertices", sol.mesh.vertices.size()},
         {"cg_iterations", sol.cg_iterations},
         {"cg_relative_residual", report::number(sol.cg_relative_residual)},
         {"energy", report::number(sol.energy)},
         {"diagnostics", report::to_json(d)}};
    out.verdicts.push_back({"positivity", d.positivity_ok});
    out.verdicts.push_back({"hopf", d.hopf_ok});
    if (p.shape.smooth()) {
      const FemPFunctionReport pf = p_function(sol);
      j["p_function"] = {{"max_boundary", report::number(pf.max_boundary)},
                         {"max_interior", report::number(pf.max_interior)},
                         {"max_on_boundary", pf.max_on_boundary},
                         {"min_lap_P_interior", report::number(pf.min_lap_P_interior)}};
      out.verdicts.push_back({"p_max_on_boundary", pf.max_on_boundary});
      if (ids) {
        const FemPrimitives prim = compute_fem_primitives(sol);
        *ids = {magnanini_poggesi_from(prim), check_alexandrov(sol), fem_volume_balance_from(prim),
                fem_heintze_karcher_from(prim)};
      }
    }
  }
  return j;
}

Problem problem_with_model(const RunConfig& cfg) {
  Problem p = cfg.problem;
  if (p.kind == Problem::Kind::fem) p.model = effective_model(cfg);
  return p;
}

}  // namespace

Verb verb_from_string(const std::string& name) {
  if (name == "check-model") return Verb::check_model;
  if (name == "solve") return Verb::solve;
  if (name == "verify") return Verb::verify;
  if (name == "sweep") return Verb::sweep;
  throw Error(ErrorCode::invalid_argument, "unknown verb '" + name + "'");
}

bool Outcome::all_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.ok; });
}

Outcome execute(Verb verb, const RunConfig& cfg, const CliOptions& opt) {
  Outcome out;
  const std::optional<double> tol = opt.tolerance ? opt.tolerance : cfg.tolerance;
  const WarpedGeometry geom = build_model(effective_model(cfg));
  json& rep = out.report;
  rep["config"] = cfg.source;

  switch (verb) {
    case Verb::check_model: {
      rep["model"] = model_section(geom, cfg, out);
      break;
    }
    case Verb::solve: {
      rep["model"] = model_section(geom, cfg, out);
      std::string fields, solution;
      rep["solve"] = solve_section(geom, cfg, out, nullptr, &fields, &solution);
      out.csv = fields;
      out.solution_csv = solution;
      break;
    }
    case Verb::verify: {
      rep["model"] = model_section(geom, cfg, out);
      std::vector<IdentityReport> single;
      rep["solve"] = solve_section(geom, cfg, out, &single, nullptr, nullptr);
      const auto names = selected(cfg);
      std::vector<IdentityReport> ids;
      const bool inner_slice =
          cfg.problem.kind == Problem::Kind::radial && cfg.problem.domain.inner == RadialDomain::Inner::radius;
      if (inner_slice) {
        out.warnings.push_back("identities need a ball or a horizon annulus; only field checks were run");
      } else if (cfg.resolutions.size() >= 3) {
        const ConvergenceReport conv = run_levels(problem_with_model(cfg), cfg.resolutions);
        for (const auto& w : conv.warnings) out.warnings.push_back(w);
        std::vector<IdentityReport> ext = conv.extrapolated;
        if (cfg.problem.kind == Problem::Kind::fem) {
          // the flat Alexandrov identity is the Magnanini-Poggesi one; extrapolate it once
          for (const auto& r : conv.extrapolated) {
            if (r.name == "magnanini_poggesi") {
              IdentityReport a = r;
              a.name = "alexandrov";
              ext.push_back(a);
            }
          }
        }
        for (auto& r : ext) r.resolution = "extrapolated";
        ids = filter(ext, names, tol, out.warnings);
        rep["convergence"] = {{"resolutions", cfg.resolutions},
                              {"flux_order", report::number(conv.flux_order)},
                              {"flux_extrapolated", report::number(conv.flux_extrapolated)}};
        bool hopf_all = true;
        for (const auto& lv : conv.levels) hopf_all = hopf_all && lv.hopf.positivity_ok && lv.hopf.hopf_ok;
        out.verdicts.push_back({"hopf_all_levels", hopf_all});
      } else {
        ids = filter(single, names, tol, out.warnings);
      }
      json arr = json::array();
      for (const auto& r : ids) {
        arr.push_back(report::to_json(r));
        out.verdicts.push_back({r.name, r.passed()});
      }
      rep["identities"] = arr;
      out.csv = report::identities_csv(ids);
      break;
    }
    case Verb::sweep: {
      if (cfg.resolutions.size() < 3) {
        throw Error(ErrorCode::insufficient_levels, "sweep needs at least 3 resolutions, got " +
                                                        std::to_string(cfg.resolutions.size()));
      }
      const auto names = selected(cfg);
      ConvergenceReport conv = run_levels(problem_with_model(cfg), cfg.resolutions);
      for (const auto& w : conv.warnings) out.warnings.push_back(w);
      auto keep = [&](const IdentityReport& r) {
        return std::find(names.begin(), names.end(), r.name) != names.end();
      };
      for (auto& lv : conv.levels) {
        std::vector<IdentityReport> kept;
        for (auto& r : lv.identities) {
          if (keep(r)) {
            apply_tolerance(r, tol);
            kept.push_back(r);
          }
        }
        lv.identities = kept;
      }
      std::vector<IdentityReport> ext;
      for (auto& r : conv.extrapolated) {
        if (keep(r)) {
          apply_tolerance(r, tol);
          ext.push_back(r);
          out.verdicts.push_back({r.name, r.passed()});
        }
      }
      conv.extrapolated = ext;
      rep["sweep"] = report::to_json(conv);
      out.csv = report::sweep_csv(conv);
      break;
    }
  }

  json verdicts = json::object();
  for (const auto& v : out.verdicts) verdicts[v.name] = v.ok;
  rep["verdicts"] = verdicts;
  rep["warnings"] = out.warnings;
  rep["passed"] = out.all_passed();
  return out;
}

int run(Verb verb, const std::string& config_path, const CliOptions& opt, std::ostream& os, std::ostream& err) {
  static const char* names[] = {"check-model", "solve", "verify", "sweep"};
  const std::string vname = names[static_cast<int>(verb)];
  try {
    const RunConfig cfg = load_config(config_path);
    Outcome res = execute(verb, cfg, opt);
    const std::filesystem::path dir = opt.out_dir ? *opt.out_dir : cfg.out_dir;
    std::string stem = vname;
    std::replace(stem.begin(), stem.end(), '-', '_');

    const bool want_csv = opt.csv || verb == Verb::sweep;
    if (opt.json) {
      const auto path = (dir / (stem + ".json")).string();
      report::write_file(path, report::dump(res.report));
      res.written.push_back(path);
    }
    if (want_csv && !res.csv.empty()) {
      const std::string name = verb == Verb::solve ? "fields.csv" : stem + ".csv";
      const auto path = (dir / name).string();
      report::write_file(path, res.csv);
      res.written.push_back(path);
    }
    if (want_csv && !res.solution_csv.empty()) {
      const auto path = (dir / "solution.csv").string();
      report::write_file(path, res.solution_csv);
      res.written.push_back(path);
    }

    for (const auto& w : res.warnings) err << "warning: " << w << "\n";
    for (const auto& v : res.verdicts) os << (v.ok ? "PASS " : "FAIL ") << v.name << "\n";
    for (const auto& p : res.written) os << "wrote " << p << "\n";
    return res.all_passed() ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace substatic
