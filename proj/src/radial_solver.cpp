#include "substatic/radial_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "substatic/errors.hpp"
#include "substatic/richardson.hpp"

namespace substatic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Thomas algorithm; a = sub, b = diag, c = super.
std::vector<double> thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                           std::vector<double> d) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (b[i - 1] == 0.0 || !std::isfinite(b[i - 1])) {
      throw Error(ErrorCode::singular_matrix, "zero pivot in tridiagonal solve");
    }
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  if (b[n - 1] == 0.0 || !std::isfinite(b[n - 1])) {
    throw Error(ErrorCode::singular_matrix, "zero pivot in tridiagonal solve");
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
  return x;
}

// u' at an end node from three neighbours, with u'' replaced through the ODE.
// dir = -1 at the outer end (neighbours to the left), +1 at the inner end.
double endpoint_derivative(const RadialSolution& s, int i, int dir, int n) {
  const double h = s.step;
  const ProfileJet& p = s.jets[i];
  const double V = p.potential(n);
  const double pc = (n - 1) * p.h1_over_h;
  const double A = -1.0 + V * s.u[i];
  Eigen::Matrix3d M;
  Eigen::Vector3d rhs;
  for (int k = 1; k <= 3; ++k) {
    const double d = dir * k * h;
    M(k - 1, 0) = d + 0.5 * d * d * (-pc);
    M(k - 1, 1) = d * d * d / 6.0;
    M(k - 1, 2) = d * d * d * d / 24.0;
    rhs(k - 1) = s.u[i + dir * k] - s.u[i] - 0.5 * d * d * A;
  }
  return M.fullPivLu().solve(rhs)(0);
}

RadialSolution grid_solve(const WarpedGeometry& geom, const RadialDomain& domain, double c_inner,
                          int nodes) {
  const int n = geom.dimension();
  using Inner = RadialDomain::Inner;
  if (nodes < 5) throw Error(ErrorCode::invalid_argument, "radial solve needs at least 5 nodes");
  if (domain.inner == Inner::horizon) {
    if (!geom.has_horizon()) throw Error(ErrorCode::no_horizon, "domain starts at a horizon the model lacks");
    if (!(c_inner > 0.0)) throw Error(ErrorCode::invalid_argument, "horizon value must be positive");
  }
  if (domain.inner == Inner::center && geom.has_horizon()) {
    throw Error(ErrorCode::invalid_argument, "model with a horizon has no center");
  }

  RadialSolution s{geom};
  s.domain = domain;
  s.c_inner = c_inner;
  const double rho_in = domain.inner == Inner::radius ? geom.to_arclength(domain.inner_coord) : 0.0;
  const double rho_out = geom.to_arclength(domain.outer_coord);
  if (!(rho_out > rho_in)) throw Error(ErrorCode::invalid_argument, "outer slice must lie beyond the inner one");
  if (!(domain.outer_coord < geom.upper())) throw Error(ErrorCode::out_of_interval, "outer slice outside the model");

  const int N = nodes - 1;
  s.step = (rho_out - rho_in) / N;
  s.rho.resize(nodes);
  for (int i = 0; i <= N; ++i) s.rho[i] = rho_in + s.step * i;
  s.rho[N] = rho_out;
  s.coord = geom.from_arclength(s.rho);
  s.coord[N] = domain.outer_coord;
  if (domain.inner == Inner::radius) s.coord[0] = domain.inner_coord;
  s.jets.resize(nodes);
  for (int i = 0; i <= N; ++i) {
    s.jets[i] = (i == 0 && domain.inner != Inner::radius) ? geom.eval_inner() : geom.eval(s.coord[i]);
  }

  const double h = s.step, h2 = h * h;
  std::vector<double> a(nodes, 0.0), b(nodes, 0.0), c(nodes, 0.0), d(nodes, 0.0);
  std::vector<double> V(nodes), P(nodes, 0.0);
  for (int i = 0; i <= N; ++i) {
    V[i] = s.jets[i].potential(n);
    if (!(i == 0 && domain.inner == Inner::center)) P[i] = (n - 1) * s.jets[i].h1_over_h;
  }
  for (int i = 1; i < N; ++i) {
    a[i] = 1.0 / h2 - P[i] / (2.0 * h);
    b[i] = -2.0 / h2 - V[i];
    c[i] = 1.0 / h2 + P[i] / (2.0 * h);
    d[i] = -1.0;
  }
  if (domain.inner == Inner::center) {
    // Ghost node u_{-1} = u_1: the radial Laplacian tends to n u''(0).
    b[0] = -2.0 * n / h2 - V[0];
    c[0] = 2.0 * n / h2;
    d[0] = -1.0;
  } else {
    b[0] = 1.0;
    d[0] = domain.inner == Inner::horizon ? c_inner : 0.0;
  }
  b[N] = 1.0;
  d[N] = 0.0;

  s.u = thomas(a, b, c, d);

  s.residual.assign(nodes, 0.0);
  for (int i = 1; i < N; ++i) {
    s.residual[i] = a[i] * s.u[i - 1] + b[i] * s.u[i] + c[i] * s.u[i + 1] + 1.0;
  }
  if (domain.inner == Inner::center) s.residual[0] = b[0] * s.u[0] + c[0] * s.u[1] + 1.0;
  s.residual_max = 0.0;
  for (double r : s.residual) s.residual_max = std::max(s.residual_max, std::abs(r));

  s.du.assign(nodes, 0.0);
  s.d2u.assign(nodes, 0.0);
  for (int i = 1; i < N; ++i) s.du[i] = (s.u[i + 1] - s.u[i - 1]) / (2.0 * h);
  s.du[N] = endpoint_derivative(s, N, -1, n);
  if (domain.inner == Inner::center) {
    s.du[0] = 0.0;
    s.d2u[0] = (V[0] * s.u[0] - 1.0) / n;
  } else {
    s.du[0] = endpoint_derivative(s, 0, +1, n);
    s.d2u[0] = -1.0 + V[0] * s.u[0] - P[0] * s.du[0];
  }
  for (int i = 1; i <= N; ++i) s.d2u[i] = -1.0 + V[i] * s.u[i] - P[i] * s.du[i];

  s.consistency.assign(nodes, 0.0);
  s.consistency_max = 0.0;
  for (int i = 2; i + 2 <= N; ++i) {
    const double upp = (-s.u[i + 2] + 16.0 * s.u[i + 1] - 30.0 * s.u[i] + 16.0 * s.u[i - 1] - s.u[i - 2]) /
                       (12.0 * h2);
    const double up = (-s.u[i + 2] + 8.0 * s.u[i + 1] - 8.0 * s.u[i - 1] + s.u[i - 2]) / (12.0 * h);
    s.consistency[i] = upp + P[i] * up - V[i] * s.u[i] + 1.0;
    s.consistency_max = std::max(s.consistency_max, std::abs(s.consistency[i]));
  }

  s.du_outer = s.du[N];
  s.boundary_flux = std::abs(s.du[N]);
  s.achieved_order = kNaN;
  return s;
}

}  // namespace

RadialSolution solve_radial(const WarpedGeometry& geom, const RadialDomain& domain, double c_inner,
                            int nodes, const SolveOptions& options) {
  RadialSolution s = grid_solve(geom, domain, c_inner, nodes);
  if (nodes < 64) {
    s.under_resolved = true;
    s.warnings.push_back("under-resolved grid (" + std::to_string(nodes) +
                         " nodes); convergence order not checked");
    return s;
  }
  if (!options.compute_order) return s;

  const int I = nodes - 1;
  double q0, q1, q2;
  if (I % 4 == 0 && I / 4 >= 16) {
    q0 = grid_solve(geom, domain, c_inner, I / 4 + 1).du_outer;
    q1 = grid_solve(geom, domain, c_inner, I / 2 + 1).du_outer;
    q2 = s.du_outer;
  } else {
    q0 = s.du_outer;
    q1 = grid_solve(geom, domain, c_inner, 2 * I + 1).du_outer;
    q2 = grid_solve(geom, domain, c_inner, 4 * I + 1).du_outer;
  }
  // Differences this small are roundoff from an exactly resolved solution.
  const double floor = 1e-10 * std::max(std::abs(q2), 1.0);
  if (std::abs(q1 - q0) <= floor && std::abs(q2 - q1) <= floor) {
    s.achieved_order = std::numeric_limits<double>::infinity();
  } else {
    s.achieved_order = richardson::observed_order(q0, q1, q2, 2.0, std::abs(q2));
  }
  if (!(s.achieved_order >= 1.5)) {
    throw Error(ErrorCode::nonconvergence,
                "observed order " + std::to_string(s.achieved_order) + " below 1.5");
  }
  return s;
}

RadialState node_state(const RadialSolution& sol, int i) {
  RadialState st;
  st.rho = sol.rho[i];
  st.u = sol.u[i];
  st.du = sol.du[i];
  st.d2u = sol.d2u[i];
  st.jet = sol.jets[i];
  return st;
}

RadialState trajectory_state(const RadialSolution& sol, double rho, int anchor) {
  const int N = sol.nodes() - 1;
  if (!(rho >= sol.rho_inner() && rho <= sol.rho_outer())) {
    throw Error(ErrorCode::out_of_interval, "rho outside the solved domain");
  }
  const int n = sol.geom.dimension();
  const bool center = sol.domain.inner == RadialDomain::Inner::center;
  if (anchor < 0) {
    anchor = static_cast<int>(std::lround((rho - sol.rho_inner()) / sol.step));
    anchor = std::clamp(anchor, 0, N);
  }
  if (center && anchor == 0) anchor = 1;
  if (center && rho == 0.0) {
    RadialState st = node_state(sol, 0);
    return st;
  }

  auto jet_at = [&](double r) -> ProfileJet {
    if (r == sol.rho_inner() && !(sol.domain.inner == RadialDomain::Inner::radius)) return sol.jets[0];
    if (sol.geom.chart() == Chart::arc_length) return sol.geom.eval(r);
    return sol.geom.eval(sol.geom.from_arclength(r));
  };
  auto rhs = [&](const ProfileJet& p, double u, double du) {
    return -1.0 + p.potential(n) * u - (n - 1) * p.h1_over_h * du;
  };

  double x = sol.rho[anchor];
  double u = sol.u[anchor], du = sol.du[anchor];
  const double dist = rho - x;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(dist) / (sol.step / 8.0))));
  const double hs = dist / steps;
  ProfileJet p0 = sol.jets[anchor];
  for (int k = 0; k < steps; ++k) {
    const ProfileJet pm = jet_at(x + 0.5 * hs);
    const ProfileJet p1 = (k + 1 == steps) ? jet_at(rho) : jet_at(x + hs);
    const double k1u = du, k1v = rhs(p0, u, du);
    const double k2u = du + 0.5 * hs * k1v, k2v = rhs(pm, u + 0.5 * hs * k1u, du + 0.5 * hs * k1v);
    const double k3u = du + 0.5 * hs * k2v, k3v = rhs(pm, u + 0.5 * hs * k2u, du + 0.5 * hs * k2v);
    const double k4u = du + hs * k3v, k4v = rhs(p1, u + hs * k3u, du + hs * k3v);
    u += hs / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    du += hs / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    x = (k + 1 == steps) ? rho : x + hs;
    p0 = p1;
  }
  RadialState st;
  st.rho = rho;
  st.u = u;
  st.du = du;
  st.jet = p0;
  st.d2u = rhs(p0, u, du);
  return st;
}

Diagnostics hopf_positivity_check(const RadialSolution& sol) {
  Diagnostics d;
  const int N = sol.nodes() - 1;
  d.min_interior_u = std::numeric_limits<double>::infinity();
  for (int i = 1; i < N; ++i) {
    if (sol.u[i] < d.min_interior_u) {
      d.min_interior_u = sol.u[i];
      d.min_u_location = sol.rho[i];
    }
  }
  if (sol.domain.inner == RadialDomain::Inner::center && sol.u[0] < d.min_interior_u) {
    d.min_interior_u = sol.u[0];
    d.min_u_location = 0.0;
  }
  d.max_boundary_normal_derivative = sol.du_outer;
  if (sol.domain.inner == RadialDomain::Inner::radius) {
    // inner slice of Sigma: outward normal is -d/drho
    d.max_boundary_normal_derivative = std::max(d.max_boundary_normal_derivative, -sol.du[0]);
  }
  d.positivity_ok = d.min_interior_u > 0.0;
  d.hopf_ok = d.max_boundary_normal_derivative < 0.0;
  d.under_resolved = sol.under_resolved;
  d.warnings = sol.warnings;
  if (d.under_resolved && !(d.positivity_ok && d.hopf_ok)) {
    d.warnings.push_back("positivity/Hopf verdict failed on an under-resolved grid");
  }
  return d;
}

}  // namespace substatic
