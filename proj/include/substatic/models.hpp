#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace substatic {

enum class Family {
  flat,
  hemisphere,
  hyperbolic,
  schwarzschild,
  desitter_schwarzschild,
  ads_schwarzschild,
  reissner_nordstrom,
  custom_profile
};

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// h, h', h'', h''' at an arc-length coordinate rho.
using ProfileCallback = std::function<std::array<double, 4>(double rho)>;

struct ModelSpec {
  Family family = Family::flat;
  int dimension = 2;
  double mass = 0.0;
  double charge = 0.0;
  double ambient_curvature = 0.0;
  double cross_section_constant = 1.0;

  // custom_profile only: jet callback on (0, custom_end); horizon at rho = 0
  // when custom_horizon is set, otherwise a smooth center.
  ProfileCallback custom;
  double custom_end = 0.0;
  bool custom_horizon = false;
  double blend_delta = 1e-4;
};

enum class Chart { arc_length, area_radius };

struct ProfileJet {
  double coord = 0.0;  // in the geometry's chart
  double h = 0.0, h1 = 0.0, h2 = 0.0, h3 = 0.0;
  double f = 0.0, f1 = 0.0, f2 = 0.0;
  // Ratios that stay finite at a horizon. f2_over_f = f''/f, h2_over_h = h''/h
  // which equals (h'/h)(f'/f).
  double f2_over_f = 0.0;
  double h2_over_h = 0.0;
  double h1_over_h = 0.0;
  double drho_dcoord = 1.0;

  /// Delta f / f = f''/f + (n-1) h''/h.
  double potential(int n) const { return f2_over_f + (n - 1) * h2_over_h; }
};

struct Horizon {
  double location = 0.0;  // chart coordinate
  bool regular = false;
};

struct HorizonData {
  double location = 0.0;
  double h = 0.0;
  double surface_gravity = 0.0;
  double integrand_limit = 0.0;         // (n-1) h''/h at the horizon
  double integrand_limit_oracle = 0.0;  // eps-sequence extrapolation
  double oracle_rel_diff = 0.0;
  bool per_unit_area = true;
};

class WarpedGeometry {
 public:
  explicit WarpedGeometry(ModelSpec spec);

  const ModelSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension; }
  double cross_section_constant() const { return cs_; }
  Chart chart() const { return chart_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }  // may be +inf
  const std::optional<Horizon>& horizon() const { return horizon_; }
  bool has_horizon() const { return horizon_.has_value(); }
  bool is_space_form() const;
  /// Curvature K of the space form; 0 for flat.
  double space_form_curvature() const;

  /// Jet at a strictly interior chart coordinate.
  ProfileJet eval(double coord) const;
  /// Jet at the inner endpoint (horizon or center); exact limits.
  ProfileJet eval_inner() const;
  /// Jet at arc-length rho, including the inner endpoint rho = 0.
  ProfileJet eval_rho(double rho) const;

  double to_arclength(double coord) const;
  double from_arclength(double rho) const;
  /// Vectorized inverse for increasing rho samples (marches once).
  std::vector<double> from_arclength(const std::vector<double>& rhos) const;
  /// Upper end of the arc-length interval (may be +inf).
  double rho_upper() const;

  /// Area-radius lapse F = f^2 and its first two r-derivatives.
  std::array<double, 3> lapse(double r) const;

 private:
  ProfileJet eval_unchecked(double coord) const;
  ProfileJet eval_custom(double rho) const;
  double G(double r) const;  // F / (r - r0)
  double arc_integral(double s_from, double s_to) const;

  ModelSpec spec_;
  Chart chart_ = Chart::arc_length;
  double cs_ = 1.0;
  double lo_ = 0.0, hi_ = 0.0;
  std::optional<Horizon> horizon_;

  // Area-radius families: F(r) = P(r) / r^k, P(r) = sum poly_[i] r^i.
  std::vector<double> poly_;
  std::vector<double> quotient_;  // P / (r - r0)
  int power_ = 0;
  // custom_profile horizon blend: linear model of h'''/h' near rho = 0
  double blend_v1_ = 0.0, blend_v2_ = 0.0;
};

WarpedGeometry build_model(const ModelSpec& spec);
ProfileJet eval_profile(const WarpedGeometry& geom, double coord);
HorizonData horizon_data(const WarpedGeometry& geom);
double chart_to_arclength(const WarpedGeometry& geom, double coord);

}  // namespace substatic
