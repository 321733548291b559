#include "substatic/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "substatic/errors.hpp"
#include "substatic/kernels.hpp"

namespace substatic {

CurvatureSample curvature_from_jet(const ProfileJet& p, int n, double c) {
  CurvatureSample s;
  s.coord = p.coord;
  const double tangential_cs = p.h > 0.0 ? (n - 2) * (c - p.h1 * p.h1) / (p.h * p.h) : 0.0;
  s.ric_radial = -(n - 1) * p.h2_over_h;
  s.ric_tangential = -p.h2_over_h + tangential_cs;

  // Hessian of f: f'' radially, (h'/h) f' tangentially.
  const double hess_rad = p.f2;
  const double hess_tan = p.f * p.h2_over_h;
  const double lap_f = hess_rad + (n - 1) * hess_tan;
  s.q_radial = p.f * s.ric_radial - hess_rad + lap_f;
  s.q_tangential = p.f * s.ric_tangential - hess_tan + lap_f;
  s.mean_curvature = (n - 1) * p.f * (p.h > 0.0 ? 1.0 / p.h : 0.0);
  return s;
}

CurvatureSample curvature_sample(const WarpedGeometry& geom, double coord) {
  return curvature_from_jet(geom.eval(coord), geom.dimension(), geom.cross_section_constant());
}

std::pair<double, double> ricci_eigen(const WarpedGeometry& geom, double coord) {
  const auto s = curvature_sample(geom, coord);
  return {s.ric_radial, s.ric_tangential};
}

std::pair<double, double> q_eigen(const WarpedGeometry& geom, double coord) {
  const auto s = curvature_sample(geom, coord);
  return {s.q_radial, s.q_tangential};
}

double mean_curvature_slice(const WarpedGeometry& geom, double coord) {
  if (geom.has_horizon() && coord == geom.horizon()->location) return 0.0;
  const ProfileJet p = geom.eval(coord);
  return (geom.dimension() - 1) * p.h1_over_h;
}

namespace {

std::vector<double> sample_grid(const WarpedGeometry& geom, int m) {
  const double lo = geom.lower();
  double end;
  if (std::isfinite(geom.upper())) {
    end = lo + 0.999 * (geom.upper() - lo);
  } else if (geom.chart() == Chart::area_radius) {
    end = 10.0 * lo;
  } else {
    const double K = geom.is_space_form() ? std::abs(geom.space_form_curvature()) : 0.0;
    end = K > 0.0 ? 5.0 / std::sqrt(K) : 5.0;
  }
  std::vector<double> xs(m);
  for (int i = 0; i < m; ++i) xs[i] = lo + (end - lo) * (i + 1) / m;
  return xs;
}

}  // namespace

ConditionReport check_brendle(const WarpedGeometry& geom, int grid_size) {
  if (grid_size < 16) throw Error(ErrorCode::invalid_argument, "grid_size must be at least 16");
  const int n = geom.dimension();
  const double c = geom.cross_section_constant();
  ConditionReport rep;
  rep.grid_size = grid_size;

  const auto xs = sample_grid(geom, grid_size);
  std::vector<ProfileJet> jets(xs.size());
  std::vector<CurvatureSample> curv(xs.size());
  kernels::for_each_index(kernels::Exec::parallel, xs.size(), [&](std::size_t i) {
    jets[i] = geom.eval(xs[i]);
    curv[i] = curvature_from_jet(jets[i], n, c);
  });

  // (H0): the cross-section constant is the lower Ricci bound of N. Catalog
  // cross-sections are unit round spheres, which satisfy it for c <= 1.
  rep.h0.ok = geom.spec().family == Family::custom_profile || c <= 1.0;
  rep.h0.witness_value = c;
  rep.h0.note = geom.spec().family == Family::custom_profile ? "asserted by the caller" : "round unit sphere";

  // (H1)
  const ProfileJet inner = geom.eval_inner();
  rep.h1.ok = std::abs(inner.h1) <= 1e-12 && inner.h2 > 0.0;
  rep.h1.witness_coord = geom.lower();
  rep.h1.witness_value = std::abs(inner.h1) > 1e-12 ? inner.h1 : inner.h2;
  if (!rep.h1.ok) rep.h1.note = std::abs(inner.h1) > 1e-12 ? "h'(0) != 0" : "h''(0) <= 0";

  // (H1'): h(rho)/rho -> 1 with h(rho)/rho even near rho = 0.
  if (geom.chart() == Chart::area_radius || inner.h != 0.0) {
    rep.h1prime.ok = false;
    rep.h1prime.witness_value = inner.h;
    rep.h1prime.note = "h(0) != 0";
  } else {
    const double scale = std::isfinite(geom.upper()) ? geom.upper() - geom.lower() : 1.0;
    const double e = 1e-3 * scale;
    const double phi1 = geom.eval(e).h / e;
    const double phi2 = geom.eval(2.0 * e).h / (2.0 * e);
    // even in rho: phi(2e) - phi(e) = O(e^2), not O(e)
    const double slope = (phi2 - phi1) / e;
    rep.h1prime.ok = std::abs(phi1 - 1.0) <= 1e-5 && std::abs(slope) <= 1e-2;
    double min_phi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      min_phi = std::min(min_phi, jets[i].h / xs[i]);
    }
    rep.h1prime.ok = rep.h1prime.ok && min_phi > 0.0;
    rep.h1prime.witness_value = slope;
  }

  // (H2)
  rep.h2.witness_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (jets[i].f < rep.h2.witness_value) {
      rep.h2.witness_value = jets[i].f;
      rep.h2.witness_coord = xs[i];
    }
  }
  rep.h2.ok = rep.h2.witness_value > 0.0;

  // (H3) sampled forward differences, (H4) distance from zero.
  std::vector<double> g3(xs.size());
  rep.h4.witness_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& p = jets[i];
    const double cs_term = (c - p.h1 * p.h1) / (p.h * p.h);
    g3[i] = 2.0 * p.h2_over_h - (n - 2) * cs_term;
    const double g4 = p.h2_over_h + cs_term;
    const double scale = std::max({std::abs(p.h2_over_h), std::abs(cs_term), 1e-300});
    const double rel = std::abs(g4) / scale;
    if (rel < rep.h4.witness_value) {
      rep.h4.witness_value = rel;
      rep.h4.witness_coord = xs[i];
    }
  }
  rep.h4.ok = rep.h4.witness_value > 1e-9;
  if (!rep.h4.ok) rep.h4.note = "h''/h + (c - h'^2)/h^2 vanishes";
  rep.h3.witness_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double tol = 1e-10 * std::max({1.0, std::abs(g3[i]), std::abs(g3[i + 1])});
    const double d = g3[i + 1] - g3[i];
    if (d < rep.h3.witness_value) {
      rep.h3.witness_value = d;
      rep.h3.witness_coord = xs[i];
    }
    if (d < -tol) rep.h3.ok = false;
  }

  rep.min_q = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double q = std::min(curv[i].q_radial, curv[i].q_tangential);
    rep.max_abs_q = std::max({rep.max_abs_q, std::abs(curv[i].q_radial), std::abs(curv[i].q_tangential)});
    if (q < rep.min_q) {
      rep.min_q = q;
      rep.min_q_coord = xs[i];
    }
  }
  rep.substatic_ok = rep.min_q >= -1e-9;
  rep.implication_ok = !(rep.h0.ok && rep.h2.ok && rep.h3.ok) || rep.substatic_ok;
  return rep;
}

}  // namespace substatic
