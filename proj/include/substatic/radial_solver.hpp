#pragma once

#include <string>
#include <utility>
#include <vector>

#include "substatic/models.hpp"

namespace substatic {

struct RadialDomain {
  enum class Inner { horizon, radius, center };
  Inner inner = Inner::center;
  double inner_coord = 0.0;  // chart coordinate, Inner::radius only
  double outer_coord = 1.0;  // chart coordinate of the outer slice
};

struct RadialSolution {
  explicit RadialSolution(WarpedGeometry g) : geom(std::move(g)) {}

  WarpedGeometry geom;
  RadialDomain domain;
  double c_inner = 0.0;
  double step = 0.0;              // uniform arc-length spacing
  std::vector<double> rho;        // arc-length nodes
  std::vector<double> coord;      // chart coordinate of each node
  std::vector<ProfileJet> jets;
  std::vector<double> u, du, d2u; // d/drho
  std::vector<double> residual;   // discrete equation residual per node
  std::vector<double> consistency;// fourth-order operator applied to u (O(step^2))
  double residual_max = 0.0;
  double consistency_max = 0.0;
  double du_outer = 0.0;          // signed u'(rho_2)
  double boundary_flux = 0.0;     // |u'(rho_2)|
  double achieved_order = 0.0;    // NaN when not computed
  bool under_resolved = false;
  std::vector<std::string> warnings;

  int nodes() const { return static_cast<int>(rho.size()); }
  double rho_inner() const { return rho.front(); }
  double rho_outer() const { return rho.back(); }
};

struct SolveOptions {
  bool compute_order = true;
};

/// Second-order finite differences for u'' + (n-1)(h'/h)u' - (Delta f/f)u = -1
/// on a uniform arc-length grid, u = 0 on the outer slice, u = c_inner on a
/// horizon, u'(0) = 0 at a center and u = 0 on an inner slice.
RadialSolution solve_radial(const WarpedGeometry& geom, const RadialDomain& domain, double c_inner,
                            int nodes, const SolveOptions& options = {});

/// State of the exact ODE trajectory through a grid node, followed to rho.
struct RadialState {
  double rho = 0.0;
  double u = 0.0, du = 0.0, d2u = 0.0;
  ProfileJet jet;
};

/// anchor < 0 selects the node nearest to rho.
RadialState trajectory_state(const RadialSolution& sol, double rho, int anchor = -1);
/// Nodal state (no integration).
RadialState node_state(const RadialSolution& sol, int i);

struct Diagnostics {
  double min_interior_u = 0.0;
  double min_u_location = 0.0;
  double max_boundary_normal_derivative = 0.0;
  bool positivity_ok = false;
  bool hopf_ok = false;
  bool under_resolved = false;
  std::vector<std::string> warnings;
};

Diagnostics hopf_positivity_check(const RadialSolution& sol);

}  // namespace substatic
