#pragma once

#include <map>
#include <string>
#include <vector>

#include "substatic/identities.hpp"
#include "substatic/mesh.hpp"
#include "substatic/models.hpp"
#include "substatic/radial_solver.hpp"

namespace substatic {

struct Problem {
  enum class Kind { radial, fem };
  Kind kind = Kind::radial;
  // radial
  ModelSpec model;
  RadialDomain domain;
  bool auto_c = true;       // impose compute_c at a horizon
  double c_inner = 0.0;     // used when auto_c is false
  // fem
  DomainShape shape;
};

struct LevelResult {
  int resolution = 0;  // radial: nodes; fem: rings (cells for the square)
  double flux = 0.0;   // radial boundary flux / fem mean boundary |grad u|
  double energy = 0.0; // fem only
  RadialPrimitives radial;
  FemPrimitives fem;
  Diagnostics hopf;
  std::vector<IdentityReport> identities;
};

struct ConvergenceReport {
  Problem problem;
  double c_used = 0.0;
  std::vector<LevelResult> levels;
  double flux_order = 0.0;
  double flux_extrapolated = 0.0;
  RadialPrimitives radial_extrapolated;
  FemPrimitives fem_extrapolated;
  std::vector<IdentityReport> extrapolated;       // assembled from extrapolated primitives
  std::map<std::string, double> residual_orders;  // per identity, last three levels
  bool energy_monotone = true;
  std::vector<std::string> warnings;
};

/// Solve one problem at the given increasing resolutions (each twice the previous
/// spacing refinement) and extrapolate. Needs at least three resolutions.
ConvergenceReport run_levels(const Problem& problem, const std::vector<int>& resolutions);

/// Resolutions base, 2 base - 1, ... (radial nodes) or base, 2 base, ... (rings).
ConvergenceReport refine_and_extrapolate(const Problem& problem, int base_resolution, int levels);

std::vector<int> geometric_resolutions(const Problem& problem, int base, int levels);

/// Radial primitives: second-order Richardson on the last two levels.
RadialPrimitives extrapolate(const std::vector<RadialPrimitives>& levels);
/// Planar primitives: per-primitive observed order from the last three levels.
FemPrimitives extrapolate(const std::vector<FemPrimitives>& levels);

}  // namespace substatic
