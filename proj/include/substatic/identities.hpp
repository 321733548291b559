#pragma once

#include <string>
#include <utility>
#include <vector>

#include "substatic/fem_solver.hpp"
#include "substatic/models.hpp"
#include "substatic/radial_solver.hpp"

namespace substatic {

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<std::pair<std::string, double>> terms;
  std::vector<std::pair<std::string, bool>> nonnegative;  // deficit terms >= -tolerance
  double residual_abs = 0.0;
  double residual_rel = 0.0;
  double tolerance = 1e-6;
  bool residual_ok = false;
  bool has_inequality = false;
  bool inequality_ok = true;
  bool umbilical = false;  // set when the curvature deficit side vanishes
  std::string resolution;

  bool passed() const;
  double term(const std::string& key) const;
};

/// Horizon constant. `c` balances the horizon integrals of the main integral
/// identity, ((n-1)/n) * int|grad f| / int|grad f| L. `literal` is the bare
/// quotient int|grad f| / int|grad f| L.
struct CDetails {
  double c = 0.0;
  double c_closed = 0.0;         // h0 / (n h0'')
  double literal = 0.0;
  double literal_closed = 0.0;   // h0 / ((n-1) h0'')
  double literal_oracle = 0.0;   // with the eps-sequence limit
  double ratio_vs_closed = 0.0;  // max relative disagreement of the two forms
};

CDetails compute_c_details(const WarpedGeometry& geom);
double compute_c(const WarpedGeometry& geom);

struct HorizonPositivity {
  double value = 0.0;            // surface gravity * integrand limit
  bool positive = false;
  double minus_ricci_normal = 0.0;
  double static_rel_diff = 0.0;  // |(-Ric(nu,nu)) - limit| / limit
};

HorizonPositivity horizon_positivity(const WarpedGeometry& geom);

/// Per-unit-cross-section ingredients of every radial identity. All identities
/// are assembled from these, so extrapolating them extrapolates the identities.
struct RadialPrimitives {
  int n = 2;
  bool horizon = false;
  double c = 0.0;              // imposed horizon value
  double horizon_flux = 0.0;   // int_N |grad f|
  double horizon_limit = 0.0;  // (n-1) h''/h at N
  double f_outer = 0.0;
  double area_outer = 0.0;     // h^{n-1} at the outer slice
  double H_outer = 0.0;
  double vol_f = 0.0;          // int_Omega f
  double flux = 0.0;           // |u'| on Sigma
  double bulk_traceless = 0.0; // int f |T|^2
  double bulk_q = 0.0;         // int Q(W, W)
  int nodes = 0;
};

RadialPrimitives compute_primitives(const WarpedGeometry& geom, const RadialSolution& sol);

struct Constants {
  double c = 0.0;
  double R = 0.0;
  double Hbar = 0.0;
  double vol_f = 0.0;
  double boundary_f_flux = 0.0;  // int_Sigma f |grad u|
  double horizon_term = 0.0;     // c int_N |grad f|
  double volume_balance_residual = 0.0;
};

Constants constants_from(const RadialPrimitives& p);
Constants compute_constants(const WarpedGeometry& geom, const RadialSolution& sol);

IdentityReport main_identity_from(const RadialPrimitives& p);
IdentityReport alexandrov_from(const RadialPrimitives& p);
IdentityReport heintze_karcher_from(const RadialPrimitives& p);
IdentityReport volume_balance_from(const RadialPrimitives& p);

IdentityReport check_main_identity(const WarpedGeometry& geom, const RadialSolution& sol);
IdentityReport check_alexandrov(const WarpedGeometry& geom, const RadialSolution& sol);
IdentityReport check_heintze_karcher(const WarpedGeometry& geom, const RadialSolution& sol);
IdentityReport check_volume_balance(const WarpedGeometry& geom, const RadialSolution& sol);

/// Flat planar (n = 2, f = 1) ingredients.
struct FemPrimitives {
  double area = 0.0;
  double perimeter = 0.0;
  double bulk_traceless = 0.0;  // int |Hess u - (Delta u / 2) g|^2
  double int_g = 0.0;           // int_Sigma |grad u|
  double int_g2 = 0.0;
  double int_g2H = 0.0;
  double int_invH = 0.0;
  double int_hk_deficit = 0.0;  // int (1/H)(1 - 2 H |grad u|)^2
  double l2_g2 = 0.0;           // || |grad u|^2 ||_{L^2(Sigma)}
  int triangles = 0;
};

FemPrimitives compute_fem_primitives(const FemSolution& sol);

IdentityReport magnanini_poggesi_from(const FemPrimitives& p);
IdentityReport fem_volume_balance_from(const FemPrimitives& p);
IdentityReport fem_heintze_karcher_from(const FemPrimitives& p);

IdentityReport check_magnanini_poggesi(const FemSolution& sol);
/// Same identity evaluated through the general weighted integrands with f = 1.
IdentityReport check_alexandrov(const FemSolution& sol);
IdentityReport check_volume_balance(const FemSolution& sol);

struct QuantitativeBound {
  double lhs = 0.0;  // ||H - Hbar||_{L^2}
  double rhs = 0.0;  // bulk deficit / || f |grad u|^2 ||_{L^2}
  bool holds = false;
};

QuantitativeBound quantitative_bound(const FemSolution& sol);
QuantitativeBound quantitative_bound_from(const FemSolution& sol, const FemPrimitives& p);

struct UmbilicalityReport {
  double deficit = 0.0;
  double ricci_gap = 0.0;  // |ric_radial - ric_tangential|
  std::string note;
};

UmbilicalityReport umbilicality_deficit(const WarpedGeometry& geom, double slice_coord);
UmbilicalityReport umbilicality_deficit(const PlanarMesh& mesh);

/// |lhs - rhs| / max(|lhs|, |rhs|, largest |term|, 1e-14)
void finalize_residual(IdentityReport& r);

}  // namespace substatic
