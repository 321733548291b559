#pragma once

#include <array>
#include <vector>

#include "substatic/fem_solver.hpp"
#include "substatic/radial_solver.hpp"

namespace substatic {

struct FieldSample {
  double rho = 0.0;
  double X = 0.0;                    // radial component
  std::array<double, 6> terms{};     // summands of X in the order they are defined
  double traceless_norm2 = 0.0;      // |traceless part of Hess u - u Hess f / f|^2
  double traceless_term = 0.0;       // f * traceless_norm2
  double q_radial = 0.0;
  double q_term = 0.0;               // Q(W, W), W = grad u - (u/f) grad f
  double div_closed = 0.0;           // 2 traceless_term + 2 q_term
  double pde_residual = 0.0;
};

/// The six radial summands of X at a state.
std::array<double, 6> x_terms(const RadialState& st, int n);

FieldSample field_from_state(const RadialState& st, int n, double cross_section_constant);

/// X at arc length rho (exact local trajectory through the nearest node).
double eval_X(const RadialSolution& sol, double rho);

/// Closed-form divergence at rho. Throws residual_too_large when the state does
/// not satisfy the equation.
FieldSample div_X_closed(const RadialSolution& sol, double rho, int anchor = -1);

struct NumericDivergence {
  double total = 0.0;
  std::array<double, 6> terms{};  // divergence of each summand
};

/// (1/h^{n-1}) d/drho (h^{n-1} X) by central differences with spacing `step`.
NumericDivergence div_X_numeric_terms(const RadialSolution& sol, double rho, double step, int anchor = -1);
double div_X_numeric(const RadialSolution& sol, double rho, double step);

struct PFunctionReport {
  double K = 0.0;
  std::vector<double> P;
  double P_min = 0.0, P_max = 0.0;
  std::vector<double> lap_P;          // nodes two or more steps inside, zero elsewhere
  double min_lap_P = 0.0;
  double max_div_mismatch = 0.0;      // max |div_closed - f lap P|
  double div_scale = 0.0;             // max |div_closed|, max |f lap P|
  double max_gradient_mismatch = 0.0; // max |X/f - P'|, diagnostic
};

/// P_K = |grad u|^2 + (2/n)u + K u^2 on a space-form solution.
PFunctionReport p_function(const RadialSolution& sol, double K);

struct FemPFunctionReport {
  std::vector<double> P;
  double max_boundary = 0.0;
  double max_interior = 0.0;
  bool max_on_boundary = false;
  std::vector<double> lap_P;           // recovered, per vertex
  std::vector<double> div_closed;      // 2 |traceless Hess u|^2 per vertex
  double min_lap_P_interior = 0.0;
  double max_div_mismatch_interior = 0.0;
};

/// Flat (n = 2, f = 1) case: X = grad P_0 with P_0 = |grad u|^2 + u.
FemPFunctionReport p_function(const FemSolution& sol);

}  // namespace substatic
