#include "substatic/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "substatic/curvature.hpp"
#include "substatic/errors.hpp"

namespace substatic {

std::array<double, 6> x_terms(const RadialState& st, int n) {
  const ProfileJet& p = st.jet;
  const double u = st.u, du = st.du, d2u = st.d2u;
  return {
      p.f * 2.0 * du * d2u,                        // f grad|grad u|^2
      (2.0 / n) * p.f * du,                        // (2/n) f grad u
      -p.f2 * 2.0 * u * du,                        // -Hess f (grad u^2)
      -(2.0 / n) * u * p.f1,                       // -(2/n) u grad f
      -2.0 * u * d2u * p.f1,                       // -2u Hess u (grad f)
      2.0 * u * u * p.f2_over_f * p.f1,            // 2u^2 (Hess f / f)(grad f)
  };
}

FieldSample field_from_state(const RadialState& st, int n, double cs) {
  FieldSample s;
  s.rho = st.rho;
  s.terms = x_terms(st, n);
  for (double t : s.terms) s.X += t;
  const ProfileJet& p = st.jet;
  const double V = p.potential(n);
  const double radial_lap = st.d2u + (n - 1) * (std::isfinite(p.h1_over_h) ? p.h1_over_h * st.du : st.d2u);
  s.pde_residual = radial_lap + 1.0 - V * st.u;

  // Hess u - u Hess f / f is diagonal: radial and (n-1) tangential entries.
  const double m_rad = st.d2u - st.u * p.f2_over_f;
  const double m_tan = std::isfinite(p.h1_over_h) ? p.h1_over_h * st.du - st.u * p.h2_over_h
                                                  : st.d2u - st.u * p.h2_over_h;  // center limit
  const double mean = (m_rad + (n - 1) * m_tan) / n;
  s.traceless_norm2 = (m_rad - mean) * (m_rad - mean) + (n - 1) * (m_tan - mean) * (m_tan - mean);
  s.traceless_term = p.f * s.traceless_norm2;

  s.q_radial = curvature_from_jet(p, n, cs).q_radial;
  if (p.f != 0.0 && s.q_radial != 0.0) {
    const double w = st.du - st.u * p.f1 / p.f;
    s.q_term = s.q_radial * w * w;
  }
  s.div_closed = 2.0 * s.traceless_term + 2.0 * s.q_term;
  return s;
}

double eval_X(const RadialSolution& sol, double rho) {
  const RadialState st = trajectory_state(sol, rho);
  const auto t = x_terms(st, sol.geom.dimension());
  double x = 0.0;
  for (double v : t) x += v;
  return x;
}

FieldSample div_X_closed(const RadialSolution& sol, double rho, int anchor) {
  const RadialState st = trajectory_state(sol, rho, anchor);
  FieldSample s = field_from_state(st, sol.geom.dimension(), sol.geom.cross_section_constant());
  const double scale = 1.0 + std::abs(st.jet.potential(sol.geom.dimension()) * st.u);
  if (std::abs(s.pde_residual) > 1e-8 * scale) {
    throw Error(ErrorCode::residual_too_large,
                "equation residual " + std::to_string(s.pde_residual) + " at rho = " + std::to_string(rho));
  }
  return s;
}

NumericDivergence div_X_numeric_terms(const RadialSolution& sol, double rho, double step, int anchor) {
  if (!(step > 0.0) || rho - 2.0 * step < sol.rho_inner() || rho + 2.0 * step > sol.rho_outer()) {
    throw Error(ErrorCode::step_too_large, "divergence stencil leaves the solved domain");
  }
  const int n = sol.geom.dimension();
  if (anchor < 0) {
    anchor = static_cast<int>(std::lround((rho - sol.rho_inner()) / sol.step));
    anchor = std::clamp(anchor, 0, sol.nodes() - 1);
  }
  auto weighted = [&](double r) {
    const RadialState st = trajectory_state(sol, r, anchor);
    auto t = x_terms(st, n);
    const double w = std::pow(st.jet.h, n - 1);
    for (double& v : t) v *= w;
    return t;
  };
  const auto plus = weighted(rho + step);
  const auto minus = weighted(rho - step);
  const ProfileJet mid = trajectory_state(sol, rho, anchor).jet;
  const double w0 = std::pow(mid.h, n - 1);
  NumericDivergence out;
  for (int k = 0; k < 6; ++k) {
    out.terms[k] = (plus[k] - minus[k]) / (2.0 * step) / w0;
    out.total += out.terms[k];
  }
  return out;
}

double div_X_numeric(const RadialSolution& sol, double rho, double step) {
  return div_X_numeric_terms(sol, rho, step).total;
}

PFunctionReport p_function(const RadialSolution& sol, double K) {
  const WarpedGeometry& g = sol.geom;
  if (!g.is_space_form()) throw Error(ErrorCode::wrong_geometry, "P-function needs a space form");
  if (std::abs(K - g.space_form_curvature()) > 1e-12) {
    throw Error(ErrorCode::wrong_geometry, "K does not match the space form curvature");
  }
  const int n = g.dimension();
  const int N = sol.nodes() - 1;
  PFunctionReport r;
  r.K = K;
  r.P.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    r.P[i] = sol.du[i] * sol.du[i] + (2.0 / n) * sol.u[i] + K * sol.u[i] * sol.u[i];
  }
  r.P_min = *std::min_element(r.P.begin(), r.P.end());
  r.P_max = *std::max_element(r.P.begin(), r.P.end());
  r.lap_P.assign(N + 1, 0.0);
  r.min_lap_P = std::numeric_limits<double>::infinity();
  const double h = sol.step;
  // Second differences of P next to an endpoint would use the one-sided boundary
  // derivative, whose O(step^2) error is amplified by 1/step^2; skip those nodes.
  for (int i = 2; i < N - 1; ++i) {
    const double pp = (r.P[i + 1] - 2.0 * r.P[i] + r.P[i - 1]) / (h * h);
    const double p1 = (r.P[i + 1] - r.P[i - 1]) / (2.0 * h);
    r.lap_P[i] = pp + (n - 1) * sol.jets[i].h1_over_h * p1;
    r.min_lap_P = std::min(r.min_lap_P, r.lap_P[i]);
    const FieldSample fs = field_from_state(node_state(sol, i), n, g.cross_section_constant());
    const double flap = sol.jets[i].f * r.lap_P[i];
    r.max_div_mismatch = std::max(r.max_div_mismatch, std::abs(fs.div_closed - flap));
    r.div_scale = std::max({r.div_scale, std::abs(fs.div_closed), std::abs(flap)});
    const double dP = 2.0 * sol.du[i] * sol.d2u[i] + (2.0 / n) * sol.du[i] + 2.0 * K * sol.u[i] * sol.du[i];
    r.max_gradient_mismatch = std::max(r.max_gradient_mismatch, std::abs(fs.X / sol.jets[i].f - dP));
  }
  return r;
}

FemPFunctionReport p_function(const FemSolution& sol) {
  const auto& mesh = sol.mesh;
  const std::size_t nv = mesh.vertices.size();
  FemPFunctionReport r;
  r.P.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& g = sol.nodal_gradient[v];
    r.P[v] = g[0] * g[0] + g[1] * g[1] + sol.u[v];
  }
  std::vector<char> on_boundary(nv, 0);
  for (int b : mesh.boundary) on_boundary[b] = 1;
  r.max_boundary = -std::numeric_limits<double>::infinity();
  r.max_interior = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < nv; ++v) {
    (on_boundary[v] ? r.max_boundary : r.max_interior) =
        std::max(on_boundary[v] ? r.max_boundary : r.max_interior, r.P[v]);
  }
  r.max_on_boundary = r.max_boundary >= r.max_interior;

  std::vector<std::array<double, 2>> gP;
  std::vector<std::array<double, 3>> hP;
  recover_derivatives(mesh, r.P, gP, hP);
  r.lap_P.resize(nv);
  r.div_closed.resize(nv);
  r.min_lap_P_interior = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < nv; ++v) {
    r.lap_P[v] = hP[v][0] + hP[v][2];
    const auto& H = sol.nodal_hessian[v];
    const double half_trace = 0.5 * (H[0] + H[2]);
    const double a = H[0] - half_trace, d = H[2] - half_trace;
    r.div_closed[v] = 2.0 * (a * a + d * d + 2.0 * H[1] * H[1]);
    if (!on_boundary[v]) {
      r.min_lap_P_interior = std::min(r.min_lap_P_interior, r.lap_P[v]);
      r.max_div_mismatch_interior =
          std::max(r.max_div_mismatch_interior, std::abs(r.lap_P[v] - r.div_closed[v]));
    }
  }
  return r;
}

}  // namespace substatic
