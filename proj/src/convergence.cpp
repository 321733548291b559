#include "substatic/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "substatic/errors.hpp"
#include "substatic/fem_solver.hpp"
#include "substatic/richardson.hpp"

namespace substatic {

namespace {

PlanarMesh make_mesh(const DomainShape& shape, int resolution) {
  switch (shape.kind) {
    case DomainShape::Kind::disk: return make_disk_mesh(shape.a, resolution);
    case DomainShape::Kind::ellipse: return make_ellipse_mesh(shape.a, shape.b, resolution);
    case DomainShape::Kind::square: return make_square_mesh(shape.a, resolution);
    default: break;
  }
  throw Error(ErrorCode::invalid_argument, "sweeps need a generated mesh (disk, ellipse or square)");
}

double fem_extrapolate(double c, double m, double f, double ratio) {
  double p = richardson::observed_order(c, m, f, ratio, std::abs(f));
  if (std::isinf(p)) return f;
  if (std::isnan(p)) p = 2.0;
  p = std::clamp(p, 1.0, 4.0);
  return richardson::extrapolate(m, f, p, ratio);
}

double spacing_ratio(const Problem& problem, const ConvergenceReport& rep) {
  const std::size_t L = rep.levels.size();
  const double a = rep.levels[L - 2].resolution, b = rep.levels[L - 1].resolution;
  return problem.kind == Problem::Kind::radial ? (b - 1.0) / (a - 1.0) : b / a;
}

}  // namespace

std::vector<int> geometric_resolutions(const Problem& problem, int base, int levels) {
  std::vector<int> r;
  int res = base;
  for (int k = 0; k < levels; ++k) {
    r.push_back(res);
    res = problem.kind == Problem::Kind::radial ? 2 * (res - 1) + 1 : 2 * res;
  }
  return r;
}

RadialPrimitives extrapolate(const std::vector<RadialPrimitives>& lv) {
  if (lv.size() < 2) throw Error(ErrorCode::insufficient_levels, "need two levels to extrapolate");
  const RadialPrimitives& m = lv[lv.size() - 2];
  RadialPrimitives out = lv.back();
  // spacing ratio of the last two grids
  const double ratio = (m.nodes > 1 && out.nodes > m.nodes) ? double(out.nodes - 1) / (m.nodes - 1) : 2.0;
  auto ext = [&](double coarse, double fine) { return richardson::extrapolate(coarse, fine, 2.0, ratio); };
  out.flux = ext(m.flux, out.flux);
  out.bulk_traceless = ext(m.bulk_traceless, out.bulk_traceless);
  out.bulk_q = ext(m.bulk_q, out.bulk_q);
  out.vol_f = ext(m.vol_f, out.vol_f);
  return out;
}

FemPrimitives extrapolate(const std::vector<FemPrimitives>& lv) {
  if (lv.size() < 3) throw Error(ErrorCode::insufficient_levels, "need three levels to extrapolate");
  const auto& c = lv[lv.size() - 3];
  const auto& m = lv[lv.size() - 2];
  FemPrimitives out = lv.back();
  // meshes are refined geometrically; the spacing ratio follows from the counts
  const double ratio = (m.triangles > 0 && out.triangles > m.triangles)
                           ? std::sqrt(double(out.triangles) / m.triangles) : 2.0;
  auto ext = [ratio](double c, double m, double f) { return fem_extrapolate(c, m, f, ratio); };
  out.area = ext(c.area, m.area, out.area);
  out.perimeter = ext(c.perimeter, m.perimeter, out.perimeter);
  out.bulk_traceless = ext(c.bulk_traceless, m.bulk_traceless, out.bulk_traceless);
  out.int_g = ext(c.int_g, m.int_g, out.int_g);
  out.int_g2 = ext(c.int_g2, m.int_g2, out.int_g2);
  out.int_g2H = ext(c.int_g2H, m.int_g2H, out.int_g2H);
  out.int_invH = ext(c.int_invH, m.int_invH, out.int_invH);
  out.int_hk_deficit = ext(c.int_hk_deficit, m.int_hk_deficit, out.int_hk_deficit);
  out.l2_g2 = ext(c.l2_g2, m.l2_g2, out.l2_g2);
  return out;
}

ConvergenceReport run_levels(const Problem& problem, const std::vector<int>& resolutions) {
  if (resolutions.size() < 3) {
    throw Error(ErrorCode::insufficient_levels, "convergence study needs at least 3 resolutions");
  }
  ConvergenceReport rep;
  rep.problem = problem;

  if (problem.kind == Problem::Kind::radial) {
    const WarpedGeometry geom = build_model(problem.model);
    double c = 0.0;
    if (problem.domain.inner == RadialDomain::Inner::horizon) {
      c = problem.auto_c ? compute_c(geom) : problem.c_inner;
    }
    rep.c_used = c;
    std::vector<RadialPrimitives> prims;
    for (int nodes : resolutions) {
      const RadialSolution sol = solve_radial(geom, problem.domain, c, nodes, {false});
      LevelResult lv;
      lv.resolution = nodes;
      lv.flux = sol.boundary_flux;
      lv.hopf = hopf_positivity_check(sol);
      lv.radial = compute_primitives(geom, sol);
      lv.identities = {main_identity_from(lv.radial), alexandrov_from(lv.radial),
                       volume_balance_from(lv.radial)};
      if (lv.radial.H_outer > 0.0) lv.identities.push_back(heintze_karcher_from(lv.radial));
      for (const auto& w : sol.warnings) rep.warnings.push_back(w);
      prims.push_back(lv.radial);
      rep.levels.push_back(std::move(lv));
    }
    rep.radial_extrapolated = extrapolate(prims);
    const auto& e = rep.radial_extrapolated;
    rep.extrapolated = {main_identity_from(e), alexandrov_from(e), volume_balance_from(e)};
    if (e.H_outer > 0.0) rep.extrapolated.push_back(heintze_karcher_from(e));
    rep.flux_extrapolated = e.flux;
  } else {
    std::vector<FemPrimitives> prims;
    for (int res : resolutions) {
      const FemSolution sol = solve_flat_fem(make_mesh(problem.shape, res));
      LevelResult lv;
      lv.resolution = res;
      lv.energy = sol.energy;
      lv.hopf = hopf_positivity_check(sol);
      if (problem.shape.smooth()) {
        lv.fem = compute_fem_primitives(sol);
        lv.flux = lv.fem.int_g / lv.fem.perimeter;
        lv.identities = {magnanini_poggesi_from(lv.fem), check_alexandrov(sol), fem_volume_balance_from(lv.fem),
                         fem_heintze_karcher_from(lv.fem)};
      }
      prims.push_back(lv.fem);
      rep.levels.push_back(std::move(lv));
    }
    for (std::size_t k = 1; k < rep.levels.size(); ++k) {
      if (!(rep.levels[k].energy < rep.levels[k - 1].energy)) rep.energy_monotone = false;
    }
    if (problem.shape.smooth()) {
      rep.fem_extrapolated = extrapolate(prims);
      const auto& e = rep.fem_extrapolated;
      rep.extrapolated = {magnanini_poggesi_from(e), fem_volume_balance_from(e), fem_heintze_karcher_from(e)};
      rep.flux_extrapolated = e.int_g / e.perimeter;
    }
  }

  const std::size_t L = rep.levels.size();
  const double q0 = rep.levels[L - 3].flux, q1 = rep.levels[L - 2].flux, q2 = rep.levels[L - 1].flux;
  const double floor = 1e-10 * std::max(std::abs(q2), 1.0);
  rep.flux_order = (std::abs(q1 - q0) <= floor && std::abs(q2 - q1) <= floor)
                       ? std::numeric_limits<double>::infinity()
                       : richardson::observed_order(q0, q1, q2, spacing_ratio(problem, rep), std::abs(q2));
  for (std::size_t i = 0; i < rep.levels.back().identities.size(); ++i) {
    const std::string& name = rep.levels.back().identities[i].name;
    const double r1 = rep.levels[L - 2].identities[i].residual_abs;
    const double r2 = rep.levels[L - 1].identities[i].residual_abs;
    const bool noise = rep.levels[L - 2].identities[i].residual_rel <= 1e-12 &&
                       rep.levels[L - 1].identities[i].residual_rel <= 1e-12;
    rep.residual_orders[name] = (!noise && r1 > 0.0 && r2 > 0.0)
                                    ? std::log(r1 / r2) / std::log(spacing_ratio(problem, rep))
                                    : std::numeric_limits<double>::infinity();
  }
  return rep;
}

ConvergenceReport refine_and_extrapolate(const Problem& problem, int base_resolution, int levels) {
  if (levels < 3) throw Error(ErrorCode::insufficient_levels, "refine_and_extrapolate needs levels >= 3");
  return run_levels(problem, geometric_resolutions(problem, base_resolution, levels));
}

}  // namespace substatic
