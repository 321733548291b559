#pragma once

#include <string>
#include <utility>

#include "substatic/models.hpp"

namespace substatic {

struct CurvatureSample {
  double coord = 0.0;
  double ric_radial = 0.0;
  double ric_tangential = 0.0;  // per unit cross-section direction
  double q_radial = 0.0;
  double q_tangential = 0.0;
  double mean_curvature = 0.0;
};

struct ConditionResult {
  bool ok = true;
  double witness_coord = 0.0;
  double witness_value = 0.0;
  std::string note;
};

struct ConditionReport {
  ConditionResult h0, h1, h1prime, h2, h3, h4;
  bool substatic_ok = true;
  double min_q = 0.0;
  double min_q_coord = 0.0;
  double max_abs_q = 0.0;
  // h0 && h2 && h3 must imply substatic_ok.
  bool implication_ok = true;
  int grid_size = 0;
};

std::pair<double, double> ricci_eigen(const WarpedGeometry& geom, double coord);
std::pair<double, double> q_eigen(const WarpedGeometry& geom, double coord);
double mean_curvature_slice(const WarpedGeometry& geom, double coord);
CurvatureSample curvature_sample(const WarpedGeometry& geom, double coord);

/// Same formulas on an already evaluated jet (any point, including a horizon).
CurvatureSample curvature_from_jet(const ProfileJet& jet, int n, double cross_section_constant);

ConditionReport check_brendle(const WarpedGeometry& geom, int grid_size);

}  // namespace substatic
