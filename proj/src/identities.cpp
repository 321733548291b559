#include "substatic/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "substatic/curvature.hpp"
#include "substatic/errors.hpp"
#include "substatic/fields.hpp"
#include "substatic/quadrature.hpp"

namespace substatic {

namespace {

// Composite Simpson on a uniform grid; 3/8 rule closes an odd interval count.
double simpson(const std::vector<double>& y, double h) {
  const int N = static_cast<int>(y.size()) - 1;
  if (N < 1) return 0.0;
  if (N == 1) return 0.5 * h * (y[0] + y[1]);
  if (N == 2) return h / 3.0 * (y[0] + 4.0 * y[1] + y[2]);
  const int even = (N % 2 == 0) ? N : N - 3;
  double s = 0.0;
  for (int i = 0; i + 2 <= even; i += 2) s += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  if (even != N) {
    s += 3.0 * h / 8.0 * (y[N - 3] + 3.0 * y[N - 2] + 3.0 * y[N - 1] + y[N]);
  }
  return s;
}

IdentityReport make(const std::string& name, double lhs, double rhs,
                    std::vector<std::pair<std::string, double>> terms, double tol) {
  IdentityReport r;
  r.name = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.terms = std::move(terms);
  r.tolerance = tol;
  finalize_residual(r);
  return r;
}

void add_nonnegative(IdentityReport& r, const std::string& key, double value, double scale) {
  r.nonnegative.emplace_back(key, value >= -1e-9 * std::max(1.0, scale));
}

}  // namespace

void finalize_residual(IdentityReport& r) {
  double term_scale = 0.0;
  for (const auto& [k, v] : r.terms) term_scale = std::max(term_scale, std::abs(v));
  r.residual_abs = std::abs(r.lhs - r.rhs);
  const double denom = std::max({std::abs(r.lhs), std::abs(r.rhs), term_scale, 1e-14});
  r.residual_rel = r.residual_abs / denom;
  r.residual_ok = r.residual_rel <= r.tolerance;
}

bool IdentityReport::passed() const {
  if (!residual_ok || !inequality_ok) return false;
  for (const auto& [k, ok] : nonnegative) {
    if (!ok) return false;
  }
  return true;
}

double IdentityReport::term(const std::string& key) const {
  for (const auto& [k, v] : terms) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::invalid_argument, "identity report has no term '" + key + "'");
}

CDetails compute_c_details(const WarpedGeometry& geom) {
  const HorizonData hd = horizon_data(geom);
  const int n = geom.dimension();
  // per unit cross-section the horizon integrals are kappa h0^{n-1} and kappa L h0^{n-1}
  const double area = std::pow(hd.h, n - 1);
  const double num = hd.surface_gravity * area;
  const double den = hd.surface_gravity * hd.integrand_limit * area;
  if (!(den > 0.0)) throw Error(ErrorCode::nonpositive_denominator, "horizon integral is not positive");
  CDetails d;
  d.literal = num / den;
  d.c = (n - 1.0) / n * d.literal;
  d.literal_closed = hd.h / ((n - 1) * hd.surface_gravity);
  d.c_closed = hd.h / (n * hd.surface_gravity);
  d.literal_oracle = num / (hd.surface_gravity * hd.integrand_limit_oracle * area);
  d.ratio_vs_closed = std::max(std::abs(d.literal - d.literal_closed) / d.literal_closed,
                               std::abs(d.c - d.c_closed) / d.c_closed);
  return d;
}

double compute_c(const WarpedGeometry& geom) { return compute_c_details(geom).c; }

HorizonPositivity horizon_positivity(const WarpedGeometry& geom) {
  const HorizonData hd = horizon_data(geom);
  HorizonPositivity p;
  p.value = hd.surface_gravity * hd.integrand_limit;
  p.positive = p.value > 0.0;
  const CurvatureSample cs =
      curvature_from_jet(geom.eval_inner(), geom.dimension(), geom.cross_section_constant());
  p.minus_ricci_normal = -cs.ric_radial;
  p.static_rel_diff = std::abs(p.minus_ricci_normal - hd.integrand_limit) / std::abs(hd.integrand_limit);
  return p;
}

RadialPrimitives compute_primitives(const WarpedGeometry& geom, const RadialSolution& sol) {
  if (sol.domain.inner == RadialDomain::Inner::radius) {
    throw Error(ErrorCode::unsupported_surface, "identities need a ball or a horizon annulus");
  }
  const int n = geom.dimension();
  RadialPrimitives p;
  p.n = n;
  p.nodes = sol.nodes();
  p.horizon = sol.domain.inner == RadialDomain::Inner::horizon;
  if (p.horizon) {
    const HorizonData hd = horizon_data(geom);
    p.c = sol.c_inner;
    p.horizon_flux = hd.surface_gravity * std::pow(hd.h, n - 1);
    p.horizon_limit = hd.integrand_limit;
  }
  const ProfileJet& out = sol.jets.back();
  p.f_outer = out.f;
  p.area_outer = std::pow(out.h, n - 1);
  p.H_outer = (n - 1) * out.h1_over_h;
  p.flux = sol.boundary_flux;

  // int_Omega f dmu = int f h^{n-1} drho; in the area-radius chart f drho = dr.
  const double x0 = sol.coord.front(), x1 = sol.coord.back();
  std::function<double(double)> integrand;
  if (geom.chart() == Chart::area_radius) {
    integrand = [n](double r) { return std::pow(r, n - 1); };
  } else {
    integrand = [&geom, n](double x) {
      const ProfileJet j = geom.eval(x);
      return j.f * std::pow(j.h, n - 1);
    };
  }
  p.vol_f = quad::integrate(integrand, x0, x1, 1e-15, 1e-14).value;

  const int N = sol.nodes() - 1;
  std::vector<double> tr(N + 1), q(N + 1);
  const double cs = geom.cross_section_constant();
  for (int i = 0; i <= N; ++i) {
    const FieldSample s = field_from_state(node_state(sol, i), n, cs);
    const double w = std::pow(sol.jets[i].h, n - 1);
    tr[i] = s.traceless_term * w;
    q[i] = s.q_term * w;
  }
  p.bulk_traceless = simpson(tr, sol.step);
  p.bulk_q = simpson(q, sol.step);
  return p;
}

Constants constants_from(const RadialPrimitives& p) {
  Constants c;
  c.c = p.c;
  c.vol_f = p.vol_f;
  c.horizon_term = p.horizon ? p.c * p.horizon_flux : 0.0;
  c.boundary_f_flux = p.f_outer * p.flux * p.area_outer;
  const double sigma_f = p.f_outer * p.area_outer;
  c.R = (p.vol_f + c.horizon_term) / sigma_f;
  c.Hbar = (p.n - 1.0) / p.n / c.R;
  c.volume_balance_residual = std::abs(p.vol_f - (c.boundary_f_flux - c.horizon_term)) /
                              std::max({std::abs(p.vol_f), std::abs(c.boundary_f_flux), 1e-14});
  return c;
}

Constants compute_constants(const WarpedGeometry& geom, const RadialSolution& sol) {
  return constants_from(compute_primitives(geom, sol));
}

IdentityReport main_identity_from(const RadialPrimitives& p) {
  const double a = (p.n - 1.0) / p.n;
  const double bulk = 2.0 * (p.bulk_traceless + p.bulk_q);
  double bracket = 0.0;
  if (p.horizon) {
    bracket = 2.0 * (a * p.c * p.horizon_flux - p.c * p.c * p.horizon_flux * p.horizon_limit);
  }
  const double sigma_H = -2.0 * p.f_outer * p.flux * p.flux * p.H_outer * p.area_outer;
  const double sigma_flux = 2.0 * a * p.f_outer * p.flux * p.area_outer;
  IdentityReport r = make("main_integral_identity", bulk + bracket, sigma_H + sigma_flux,
                          {{"bulk_div_X", bulk},
                           {"horizon_bracket", bracket},
                           {"boundary_mean_curvature", sigma_H},
                           {"boundary_flux", sigma_flux}},
                          1e-6);
  add_nonnegative(r, "bulk_div_X", bulk, std::abs(sigma_flux));
  r.resolution = std::to_string(p.nodes) + " nodes";
  return r;
}

IdentityReport alexandrov_from(const RadialPrimitives& p) {
  const Constants k = constants_from(p);
  const double a = (p.n - 1.0) / p.n;
  const double boundary = a / k.R * p.f_outer * (k.R - p.flux) * (k.R - p.flux) * p.area_outer;
  const double rhs = p.f_outer * p.flux * p.flux * (k.Hbar - p.H_outer) * p.area_outer;
  const double lhs = p.bulk_traceless + p.bulk_q + boundary;
  IdentityReport r = make("alexandrov", lhs, rhs,
                          {{"bulk_traceless", p.bulk_traceless},
                           {"bulk_q", p.bulk_q},
                           {"boundary_R_deficit", boundary},
                           {"mean_curvature_deficit", rhs},
                           {"R", k.R},
                           {"Hbar", k.Hbar},
                           {"H", p.H_outer}},
                          1e-6);
  // residual scale: R, Hbar and H are not summands of either side
  double scale = std::max({std::abs(p.bulk_traceless), std::abs(p.bulk_q), std::abs(boundary),
                           std::abs(rhs), p.f_outer * p.flux * p.flux * p.H_outer * p.area_outer});
  r.residual_rel = r.residual_abs / std::max({std::abs(lhs), std::abs(rhs), scale, 1e-14});
  r.residual_ok = r.residual_rel <= r.tolerance;
  add_nonnegative(r, "bulk_traceless", p.bulk_traceless, scale);
  add_nonnegative(r, "bulk_q", p.bulk_q, scale);
  add_nonnegative(r, "boundary_R_deficit", boundary, scale);
  r.umbilical = std::abs(rhs) <= 1e-8 * std::max(scale, 1e-300);
  r.resolution = std::to_string(p.nodes) + " nodes";
  return r;
}

IdentityReport heintze_karcher_from(const RadialPrimitives& p) {
  if (!(p.H_outer > 0.0)) {
    throw Error(ErrorCode::nonpositive_mean_curvature, "outer slice is not strictly mean-convex");
  }
  const double a = (p.n - 1.0) / p.n;
  const double horizon_term = p.horizon ? p.c * p.horizon_flux : 0.0;
  const double bulk = (1.0 / a) * (p.bulk_traceless + p.bulk_q);
  const double x = 1.0 - p.H_outer * p.flux / a;
  const double boundary = a * p.f_outer / p.H_outer * x * x * p.area_outer;
  const double sigma = a * p.f_outer / p.H_outer * p.area_outer;
  const double rhs = sigma - p.vol_f - horizon_term;
  IdentityReport r = make("heintze_karcher", bulk + boundary, rhs,
                          {{"bulk_deficit", bulk},
                           {"boundary_deficit", boundary},
                           {"sigma_f_over_H", sigma},
                           {"volume_f", p.vol_f},
                           {"horizon_term", horizon_term}},
                          1e-6);
  const double scale = std::max({sigma, p.vol_f, std::abs(horizon_term)});
  add_nonnegative(r, "bulk_deficit", bulk, scale);
  add_nonnegative(r, "boundary_deficit", boundary, scale);
  r.has_inequality = true;
  r.inequality_ok = rhs >= -1e-8 * scale;
  r.umbilical = std::abs(rhs) <= 1e-6 * scale;
  r.resolution = std::to_string(p.nodes) + " nodes";
  return r;
}

IdentityReport volume_balance_from(const RadialPrimitives& p) {
  const Constants k = constants_from(p);
  IdentityReport r = make("volume_balance", p.vol_f, k.boundary_f_flux - k.horizon_term,
                          {{"volume_f", p.vol_f},
                           {"boundary_f_flux", k.boundary_f_flux},
                           {"horizon_term", k.horizon_term}},
                          1e-8);
  r.resolution = std::to_string(p.nodes) + " nodes";
  return r;
}

IdentityReport check_main_identity(const WarpedGeometry& g, const RadialSolution& s) {
  return main_identity_from(compute_primitives(g, s));
}
IdentityReport check_alexandrov(const WarpedGeometry& g, const RadialSolution& s) {
  return alexandrov_from(compute_primitives(g, s));
}
IdentityReport check_heintze_karcher(const WarpedGeometry& g, const RadialSolution& s) {
  return heintze_karcher_from(compute_primitives(g, s));
}
IdentityReport check_volume_balance(const WarpedGeometry& g, const RadialSolution& s) {
  return volume_balance_from(compute_primitives(g, s));
}

// ---------------------------------------------------------------------------
// Flat planar domains

FemPrimitives compute_fem_primitives(const FemSolution& sol) {
  const auto& mesh = sol.mesh;
  if (!mesh.shape.smooth()) {
    throw Error(ErrorCode::unsupported_surface, "identity checks need a smooth (disk or ellipse) boundary");
  }
  FemPrimitives p;
  p.triangles = static_cast<int>(mesh.triangles.size());
  std::vector<double> t2(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const auto& H = sol.nodal_hessian[v];
    const double half = 0.5 * (H[0] + H[2]);
    t2[v] = (H[0] - half) * (H[0] - half) + (H[2] - half) * (H[2] - half) + 2.0 * H[1] * H[1];
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double area = triangle_area(mesh, static_cast<int>(t));
    const auto& tri = mesh.triangles[t];
    p.area += area;
    p.bulk_traceless += area * (t2[tri[0]] + t2[tri[1]] + t2[tri[2]]) / 3.0;
  }
  const int nb = static_cast<int>(mesh.boundary.size());
  for (int k = 0; k < nb; ++k) {
    const int k1 = (k + 1) % nb;
    const auto& a = mesh.vertices[mesh.boundary[k]];
    const auto& b = mesh.vertices[mesh.boundary[k1]];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double g0 = sol.boundary_grad_norm[k], g1 = sol.boundary_grad_norm[k1];
    const double H0 = mesh.boundary_curvature[k], H1 = mesh.boundary_curvature[k1];
    const double d0 = 1.0 - 2.0 * H0 * g0, d1 = 1.0 - 2.0 * H1 * g1;
    p.perimeter += len;
    p.int_g += 0.5 * len * (g0 + g1);
    p.int_g2 += 0.5 * len * (g0 * g0 + g1 * g1);
    p.int_g2H += 0.5 * len * (g0 * g0 * H0 + g1 * g1 * H1);
    p.int_invH += 0.5 * len * (1.0 / H0 + 1.0 / H1);
    p.int_hk_deficit += 0.5 * len * (d0 * d0 / H0 + d1 * d1 / H1);
    p.l2_g2 += 0.5 * len * (std::pow(g0, 4) + std::pow(g1, 4));
  }
  p.l2_g2 = std::sqrt(p.l2_g2);
  return p;
}

IdentityReport magnanini_poggesi_from(const FemPrimitives& p) {
  const double R = p.area / p.perimeter;
  const double Hbar = 0.5 / R;
  const double lhs = Hbar * p.int_g2 - p.int_g2H;
  const double r_def = R * R * p.perimeter - 2.0 * R * p.int_g + p.int_g2;
  const double boundary = 0.5 / R * r_def;
  IdentityReport r = make("magnanini_poggesi", lhs, p.bulk_traceless + boundary,
                          {{"mean_curvature_deficit", lhs},
                           {"bulk_traceless", p.bulk_traceless},
                           {"boundary_R_deficit", boundary}},
                          1e-2);
  // the deficit is a difference of these two; on a disk both sides vanish
  const double scale = std::max(Hbar * p.int_g2, p.int_g2H);
  r.residual_rel = r.residual_abs / std::max({std::abs(r.lhs), std::abs(r.rhs), scale, 1e-14});
  r.residual_ok = r.residual_rel <= r.tolerance;
  add_nonnegative(r, "bulk_traceless", p.bulk_traceless, scale);
  add_nonnegative(r, "boundary_R_deficit", boundary, scale);
  r.resolution = std::to_string(p.triangles) + " triangles";
  return r;
}

IdentityReport fem_volume_balance_from(const FemPrimitives& p) {
  IdentityReport r = make("volume_balance", p.area, p.int_g, {{"area", p.area}, {"boundary_flux", p.int_g}}, 1e-3);
  r.resolution = std::to_string(p.triangles) + " triangles";
  return r;
}

IdentityReport fem_heintze_karcher_from(const FemPrimitives& p) {
  const double bulk = 2.0 * p.bulk_traceless;
  const double boundary = 0.5 * p.int_hk_deficit;
  const double sigma = 0.5 * p.int_invH;
  IdentityReport r = make("heintze_karcher", bulk + boundary, sigma - p.area,
                          {{"bulk_deficit", bulk},
                           {"boundary_deficit", boundary},
                           {"sigma_f_over_H", sigma},
                           {"volume_f", p.area}},
                          1e-2);
  r.has_inequality = true;
  r.inequality_ok = sigma - p.area >= -1e-8 * sigma;
  r.resolution = std::to_string(p.triangles) + " triangles";
  return r;
}

IdentityReport check_magnanini_poggesi(const FemSolution& sol) {
  return magnanini_poggesi_from(compute_fem_primitives(sol));
}

IdentityReport check_alexandrov(const FemSolution& sol) {
  // General weighted form with f = 1 and Q = 0, accumulated pointwise.
  const auto& mesh = sol.mesh;
  if (!mesh.shape.smooth()) {
    throw Error(ErrorCode::unsupported_surface, "identity checks need a smooth (disk or ellipse) boundary");
  }
  const int n = 2;
  const double f = 1.0;
  double vol_f = 0.0, sigma_f = 0.0, bulk = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double area = triangle_area(mesh, static_cast<int>(t));
    vol_f += f * area;
    for (int v : mesh.triangles[t]) {
      const auto& H = sol.nodal_hessian[v];
      const double lap = H[0] + H[2];
      const double a = H[0] - lap / n, d = H[2] - lap / n;
      bulk += area / 3.0 * (f * (a * a + d * d + 2.0 * H[1] * H[1]) + 0.0);
    }
  }
  const int nb = static_cast<int>(mesh.boundary.size());
  std::vector<double> len(nb);
  for (int k = 0; k < nb; ++k) {
    const auto& a = mesh.vertices[mesh.boundary[k]];
    const auto& b = mesh.vertices[mesh.boundary[(k + 1) % nb]];
    len[k] = std::hypot(b[0] - a[0], b[1] - a[1]);
    sigma_f += f * len[k];
  }
  const double R = vol_f / sigma_f;
  const double Hbar = (n - 1.0) / n / R;
  double boundary = 0.0, rhs = 0.0, g2_hbar = 0.0, g2_h = 0.0;
  for (int k = 0; k < nb; ++k) {
    const int k1 = (k + 1) % nb;
    auto b_int = [&](int j) {
      const double g = sol.boundary_grad_norm[j];
      return (n - 1.0) / n / R * f * (R - g) * (R - g);
    };
    auto r_int = [&](int j) {
      const double g = sol.boundary_grad_norm[j];
      return f * g * g * (Hbar - mesh.boundary_curvature[j]);
    };
    boundary += 0.5 * len[k] * (b_int(k) + b_int(k1));
    rhs += 0.5 * len[k] * (r_int(k) + r_int(k1));
    const double g0 = sol.boundary_grad_norm[k], g1 = sol.boundary_grad_norm[k1];
    g2_hbar += 0.5 * len[k] * f * Hbar * (g0 * g0 + g1 * g1);
    g2_h += 0.5 * len[k] * f * (g0 * g0 * mesh.boundary_curvature[k] + g1 * g1 * mesh.boundary_curvature[k1]);
  }
  IdentityReport r = make("alexandrov", bulk + boundary, rhs,
                          {{"bulk_traceless", bulk},
                           {"bulk_q", 0.0},
                           {"boundary_R_deficit", boundary},
                           {"mean_curvature_deficit", rhs},
                           {"R", R},
                           {"Hbar", Hbar}},
                          1e-2);
  const double scale = std::max(g2_hbar, g2_h);
  r.residual_rel = r.residual_abs / std::max({std::abs(r.lhs), std::abs(r.rhs), scale, 1e-14});
  r.residual_ok = r.residual_rel <= r.tolerance;
  add_nonnegative(r, "bulk_traceless", bulk, scale);
  add_nonnegative(r, "boundary_R_deficit", boundary, scale);
  r.resolution = std::to_string(mesh.triangles.size()) + " triangles";
  return r;
}

IdentityReport check_volume_balance(const FemSolution& sol) {
  return fem_volume_balance_from(compute_fem_primitives(sol));
}

QuantitativeBound quantitative_bound_from(const FemSolution& sol, const FemPrimitives& p) {
  const auto& mesh = sol.mesh;
  const double R = p.area / p.perimeter;
  const double Hbar = 0.5 / R;
  const int nb = static_cast<int>(mesh.boundary.size());
  double l2 = 0.0;
  for (int k = 0; k < nb; ++k) {
    const int k1 = (k + 1) % nb;
    const auto& a = mesh.vertices[mesh.boundary[k]];
    const auto& b = mesh.vertices[mesh.boundary[k1]];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double d0 = mesh.boundary_curvature[k] - Hbar, d1 = mesh.boundary_curvature[k1] - Hbar;
    l2 += 0.5 * len * (d0 * d0 + d1 * d1);
  }
  QuantitativeBound q;
  q.lhs = std::sqrt(l2);
  q.rhs = p.bulk_traceless / p.l2_g2;
  q.holds = q.lhs >= q.rhs;
  return q;
}

QuantitativeBound quantitative_bound(const FemSolution& sol) {
  return quantitative_bound_from(sol, compute_fem_primitives(sol));
}

UmbilicalityReport umbilicality_deficit(const WarpedGeometry& geom, double slice_coord) {
  if (!(slice_coord >= geom.lower() && slice_coord < geom.upper())) {
    throw Error(ErrorCode::unsupported_surface, "slice outside the model");
  }
  UmbilicalityReport r;
  r.deficit = 0.0;  // slices {rho = const} are umbilical in warped products
  r.note = "radial slice";
  if (slice_coord > geom.lower()) {
    const auto [rr, rt] = ricci_eigen(geom, slice_coord);
    r.ricci_gap = std::abs(rr - rt);
  }
  return r;
}

UmbilicalityReport umbilicality_deficit(const PlanarMesh& mesh) {
  if (mesh.boundary.size() < 3) throw Error(ErrorCode::unsupported_surface, "mesh has no boundary curve");
  UmbilicalityReport r;
  r.deficit = 0.0;
  r.note = "planar curve (one principal direction)";
  return r;
}

}  // namespace substatic
