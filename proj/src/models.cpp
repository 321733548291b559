#include "substatic/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "substatic/errors.hpp"
#include "substatic/quadrature.hpp"
#include "substatic/richardson.hpp"

namespace substatic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

// Divide by (r - r0); remainder is dropped (zero up to roundoff at a root).
std::vector<double> deflate(const std::vector<double>& c, double r0) {
  const std::size_t deg = c.size() - 1;
  std::vector<double> q(deg, 0.0);
  double carry = c[deg];
  for (std::size_t i = deg; i-- > 0;) {
    q[i] = carry;
    carry = c[i] + carry * r0;
  }
  return q;
}

double refine_root(const std::vector<double>& p, double a, double b) {
  double fa = horner(p, a);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = horner(p, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  // A couple of Newton steps from the bracket midpoint.
  const auto dp = derivative(p);
  double r = 0.5 * (a + b);
  for (int it = 0; it < 3; ++it) {
    const double d = horner(dp, r);
    if (d == 0.0) break;
    const double next = r - horner(p, r) / d;
    if (next < a || next > b) break;
    r = next;
  }
  return r;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::flat: return "flat";
    case Family::hemisphere: return "hemisphere";
    case Family::hyperbolic: return "hyperbolic";
    case Family::schwarzschild: return "schwarzschild";
    case Family::desitter_schwarzschild: return "desitter_schwarzschild";
    case Family::ads_schwarzschild: return "ads_schwarzschild";
    case Family::reissner_nordstrom: return "reissner_nordstrom";
    case Family::custom_profile: return "custom_profile";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::flat, Family::hemisphere, Family::hyperbolic, Family::schwarzschild,
                   Family::desitter_schwarzschild, Family::ads_schwarzschild,
                   Family::reissner_nordstrom, Family::custom_profile}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorCode::invalid_argument, "unknown model family '" + name + "'");
}

WarpedGeometry::WarpedGeometry(ModelSpec spec) : spec_(std::move(spec)) {
  const int n = spec_.dimension;
  if (n < 2) throw Error(ErrorCode::invalid_dimension, "dimension must be at least 2");
  if (spec_.family != Family::custom_profile && spec_.cross_section_constant != 1.0) {
    throw Error(ErrorCode::invalid_argument,
                "catalog families have a round unit cross-section (constant 1)");
  }
  cs_ = spec_.cross_section_constant;

  switch (spec_.family) {
    case Family::flat:
      chart_ = Chart::arc_length;
      lo_ = 0.0;
      hi_ = kInf;
      return;
    case Family::hemisphere: {
      if (spec_.ambient_curvature == 0.0) spec_.ambient_curvature = 1.0;
      if (spec_.ambient_curvature < 0.0) {
        throw Error(ErrorCode::invalid_argument, "hemisphere needs K > 0");
      }
      chart_ = Chart::arc_length;
      lo_ = 0.0;
      hi_ = 0.5 * std::numbers::pi / std::sqrt(spec_.ambient_curvature);
      return;
    }
    case Family::hyperbolic: {
      if (spec_.ambient_curvature == 0.0) spec_.ambient_curvature = -1.0;
      if (spec_.ambient_curvature > 0.0) {
        throw Error(ErrorCode::invalid_argument, "hyperbolic space needs K < 0");
      }
      chart_ = Chart::arc_length;
      lo_ = 0.0;
      hi_ = kInf;
      return;
    }
    case Family::custom_profile: {
      if (!spec_.custom) throw Error(ErrorCode::invalid_argument, "custom_profile needs a jet callback");
      if (!(spec_.custom_end > 0.0)) throw Error(ErrorCode::invalid_argument, "custom_end must be positive");
      chart_ = Chart::arc_length;
      lo_ = 0.0;
      hi_ = spec_.custom_end;
      const auto j0 = spec_.custom(0.0);
      if (spec_.custom_horizon) {
        if (!(j0[0] > 0.0)) throw Error(ErrorCode::invalid_argument, "custom horizon needs h(0) > 0");
        if (std::abs(j0[1]) > 1e-12) {
          throw Error(ErrorCode::non_regular_horizon, "custom horizon needs h'(0) = 0");
        }
        if (!(j0[2] > 0.0)) throw Error(ErrorCode::non_regular_horizon, "custom horizon needs h''(0) > 0");
        horizon_ = Horizon{0.0, true};
        const double d = spec_.blend_delta;
        if (!(d > 0.0) || 2.0 * d >= hi_) {
          throw Error(ErrorCode::invalid_argument, "blend_delta out of range");
        }
        const auto a = spec_.custom(d);
        const auto b = spec_.custom(2.0 * d);
        blend_v1_ = a[3] / a[1];
        blend_v2_ = b[3] / b[1];
      } else if (std::abs(j0[0]) > 1e-12 || std::abs(j0[1] - 1.0) > 1e-12) {
        throw Error(ErrorCode::invalid_argument, "custom center needs h(0) = 0 and h'(0) = 1");
      }
      return;
    }
    default:
      break;
  }

  // Area-radius families.
  chart_ = Chart::area_radius;
  const double m = spec_.mass;
  const double K = spec_.ambient_curvature;
  if (m < 0.0) throw Error(ErrorCode::invalid_argument, "mass must be nonnegative");
  switch (spec_.family) {
    case Family::schwarzschild:
      if (n < 3) throw Error(ErrorCode::no_horizon, "schwarzschild lapse is constant for n = 2");
      poly_.assign(n - 1, 0.0);
      poly_[0] = -2.0 * m;
      poly_[n - 2] += 1.0;
      power_ = n - 2;
      break;
    case Family::desitter_schwarzschild:
    case Family::ads_schwarzschild: {
      if (n < 3) throw Error(ErrorCode::invalid_dimension, "black-hole families need n >= 3");
      const bool ds = spec_.family == Family::desitter_schwarzschild;
      if (ds && !(K > 0.0)) throw Error(ErrorCode::invalid_argument, "de Sitter variant needs K > 0");
      if (!ds && !(K < 0.0)) throw Error(ErrorCode::invalid_argument, "anti-de Sitter variant needs K < 0");
      poly_.assign(n + 1, 0.0);
      poly_[0] = -2.0 * m;
      poly_[n - 2] += 1.0;
      poly_[n] -= K;
      power_ = n - 2;
      break;
    }
    case Family::reissner_nordstrom:
      if (n != 3) throw Error(ErrorCode::invalid_dimension, "reissner_nordstrom is implemented for n = 3");
      if (m * m < spec_.charge * spec_.charge) {
        throw Error(ErrorCode::no_horizon, "reissner_nordstrom needs m^2 >= q^2");
      }
      if (m * m == spec_.charge * spec_.charge) {
        throw Error(ErrorCode::non_regular_horizon, "extremal reissner_nordstrom horizon is degenerate");
      }
      poly_ = {spec_.charge * spec_.charge, -2.0 * m, 1.0};
      power_ = 2;
      break;
    default:
      break;
  }

  // Scan P on a log grid: first -/+ crossing is the horizon, next +/- crossing
  // (de Sitter) closes the interval.
  const int samples = 24000;
  const double rmin = 1e-9, rmax = 1e9;
  double prev_r = rmin, prev_p = horner(poly_, rmin);
  std::optional<double> r0, rc;
  for (int i = 1; i <= samples; ++i) {
    const double r = rmin * std::pow(rmax / rmin, static_cast<double>(i) / samples);
    const double p = horner(poly_, r);
    if (!r0 && prev_p < 0.0 && p >= 0.0) {
      r0 = refine_root(poly_, prev_r, r);
    } else if (r0 && !rc && prev_p > 0.0 && p <= 0.0) {
      rc = refine_root(poly_, prev_r, r);
      break;
    }
    prev_r = r;
    prev_p = p;
  }
  if (!r0) throw Error(ErrorCode::no_horizon, "lapse has no positive root with positive slope");
  const double slope = lapse(*r0)[1];
  if (!(slope > 0.0)) throw Error(ErrorCode::non_regular_horizon, "lapse slope at the horizon is not positive");
  lo_ = *r0;
  hi_ = rc ? *rc : kInf;
  horizon_ = Horizon{*r0, true};
  quotient_ = deflate(poly_, *r0);
}

bool WarpedGeometry::is_space_form() const {
  return spec_.family == Family::flat || spec_.family == Family::hemisphere ||
         spec_.family == Family::hyperbolic;
}

double WarpedGeometry::space_form_curvature() const {
  if (!is_space_form()) throw Error(ErrorCode::wrong_geometry, "geometry is not a space form");
  return spec_.family == Family::flat ? 0.0 : spec_.ambient_curvature;
}

std::array<double, 3> WarpedGeometry::lapse(double r) const {
  if (chart_ != Chart::area_radius) {
    throw Error(ErrorCode::wrong_geometry, "lapse is defined for area-radius families only");
  }
  const auto dp = derivative(poly_);
  const auto ddp = derivative(dp);
  const double P = horner(poly_, r), P1 = horner(dp, r), P2 = horner(ddp, r);
  const double k = power_;
  const double rk = std::pow(r, -k);
  const double F = P * rk;
  const double Fr = P1 * rk - k * P * rk / r;
  const double Frr = P2 * rk - 2.0 * k * P1 * rk / r + k * (k + 1.0) * P * rk / (r * r);
  return {F, Fr, Frr};
}

double WarpedGeometry::G(double r) const { return horner(quotient_, r) * std::pow(r, -power_); }

ProfileJet WarpedGeometry::eval_custom(double rho) const {
  const auto j = spec_.custom(rho);
  ProfileJet p;
  p.coord = rho;
  p.h = j[0];
  p.h1 = j[1];
  p.h2 = j[2];
  p.h3 = j[3];
  p.f = p.h1;
  p.f1 = p.h2;
  p.f2 = p.h3;
  p.h2_over_h = p.h2 / p.h;
  p.h1_over_h = p.h1 / p.h;
  const double d = spec_.blend_delta;
  if (horizon_ && rho < d) {
    p.f2_over_f = blend_v1_ + (rho - d) / d * (blend_v2_ - blend_v1_);
  } else {
    p.f2_over_f = p.h3 / p.h1;
  }
  return p;
}

ProfileJet WarpedGeometry::eval_unchecked(double x) const {
  ProfileJet p;
  p.coord = x;
  switch (spec_.family) {
    case Family::flat:
      p.h = x;
      p.h1 = 1.0;
      p.h2 = 0.0;
      p.h3 = 0.0;
      p.f2_over_f = 0.0;
      p.h2_over_h = 0.0;
      break;
    case Family::hemisphere: {
      const double K = spec_.ambient_curvature, k = std::sqrt(K);
      const double s = std::sin(k * x), c = std::cos(k * x);
      p.h = s / k;
      p.h1 = c;
      p.h2 = -k * s;
      p.h3 = -K * c;
      p.f2_over_f = -K;
      p.h2_over_h = -K;
      break;
    }
    case Family::hyperbolic: {
      const double K = spec_.ambient_curvature, k = std::sqrt(-K);
      const double s = std::sinh(k * x), c = std::cosh(k * x);
      p.h = s / k;
      p.h1 = c;
      p.h2 = k * s;
      p.h3 = -K * c;
      p.f2_over_f = -K;
      p.h2_over_h = -K;
      break;
    }
    case Family::custom_profile:
      return eval_custom(x);
    default: {
      const auto [F, Fr, Frr] = lapse(x);
      const double f = std::sqrt(std::max(F, 0.0));
      p.h = x;
      p.h1 = f;
      p.h2 = 0.5 * Fr;
      p.h3 = 0.5 * f * Frr;
      p.f2_over_f = 0.5 * Frr;
      p.h2_over_h = 0.5 * Fr / x;
      p.drho_dcoord = 1.0 / f;
      break;
    }
  }
  p.f = p.h1;
  p.f1 = p.h2;
  p.f2 = p.h3;
  p.h1_over_h = p.h1 / p.h;
  return p;
}

ProfileJet WarpedGeometry::eval(double coord) const {
  if (!(coord > lo_ && coord < hi_)) {
    throw Error(ErrorCode::out_of_interval,
                "coordinate " + std::to_string(coord) + " outside (" + std::to_string(lo_) + ", " +
                    std::to_string(hi_) + ")");
  }
  return eval_unchecked(coord);
}

ProfileJet WarpedGeometry::eval_inner() const {
  if (horizon_) {
    if (chart_ == Chart::area_radius) {
      ProfileJet p = eval_unchecked(lo_);
      p.h1 = p.f = 0.0;
      p.h3 = p.f2 = 0.0;
      p.h1_over_h = 0.0;
      p.drho_dcoord = kInf;
      return p;
    }
    ProfileJet p = eval_custom(0.0);
    p.h1 = p.f = 0.0;
    p.h1_over_h = 0.0;
    return p;
  }
  // Smooth center: h(0) = 0, h'(0) = 1, and h''/h -> h'''(0)/h'(0).
  ProfileJet p;
  p.coord = 0.0;
  if (spec_.family == Family::custom_profile) {
    const auto j = spec_.custom(0.0);
    p.h = 0.0;
    p.h1 = j[1];
    p.h2 = j[2];
    p.h3 = j[3];
    p.f2_over_f = j[3] / j[1];
    p.h2_over_h = j[3] / j[1];
  } else {
    const double K = spec_.family == Family::flat ? 0.0 : spec_.ambient_curvature;
    p.h = 0.0;
    p.h1 = 1.0;
    p.h2 = 0.0;
    p.h3 = -K;
    p.f2_over_f = -K;
    p.h2_over_h = -K;
  }
  p.f = p.h1;
  p.f1 = p.h2;
  p.f2 = p.h3;
  p.h1_over_h = kInf;
  return p;
}

ProfileJet WarpedGeometry::eval_rho(double rho) const {
  if (rho == 0.0) return eval_inner();
  if (chart_ == Chart::arc_length) return eval(rho);
  return eval(from_arclength(rho));
}

double WarpedGeometry::arc_integral(double s_from, double s_to) const {
  const double r0 = lo_;
  auto integrand = [this, r0](double t) { return 2.0 / std::sqrt(G(r0 + t * t)); };
  return quad::integrate(integrand, s_from, s_to, 1e-15, 2e-15, 20000).value;
}

double WarpedGeometry::to_arclength(double coord) const {
  if (chart_ == Chart::arc_length) {
    if (!(coord >= lo_ && coord <= hi_)) throw Error(ErrorCode::out_of_interval, "coordinate outside interval");
    return coord;
  }
  if (!(coord >= lo_ && coord < hi_)) throw Error(ErrorCode::out_of_interval, "coordinate outside interval");
  return arc_integral(0.0, std::sqrt(coord - lo_));
}

double WarpedGeometry::rho_upper() const {
  if (chart_ == Chart::arc_length || !std::isfinite(hi_)) return hi_;
  const double r0 = lo_;
  auto integrand = [this, r0](double t) {
    const double g = G(r0 + t * t);
    return g > 0.0 ? 2.0 / std::sqrt(g) : 0.0;
  };
  return quad::integrate(integrand, 0.0, std::sqrt(hi_ - lo_), 1e-9, 1e-9, 20000).value;
}

std::vector<double> WarpedGeometry::from_arclength(const std::vector<double>& rhos) const {
  std::vector<double> out(rhos.size());
  if (chart_ == Chart::arc_length) {
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      if (!(rhos[i] >= lo_ && rhos[i] <= hi_)) throw Error(ErrorCode::out_of_interval, "rho outside interval");
      out[i] = rhos[i];
    }
    return out;
  }
  const double r0 = lo_;
  const double smax = std::isfinite(hi_) ? std::sqrt(hi_ - r0) : kInf;
  double s_prev = 0.0, rho_prev = 0.0;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const double target = rhos[i];
    if (target < 0.0) throw Error(ErrorCode::out_of_interval, "negative arc length");
    if (i > 0 && target < rhos[i - 1]) {
      s_prev = 0.0;
      rho_prev = 0.0;
    }
    if (target == 0.0) {
      out[i] = r0;
      continue;
    }
    double s = s_prev + 0.5 * (target - rho_prev) * std::sqrt(G(r0 + s_prev * s_prev));
    double lo = s_prev, hi = smax;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      if (!(s > lo && s < hi)) s = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * std::max(lo, 1e-8);
      const double rho_s = rho_prev + arc_integral(s_prev, s);
      const double err = rho_s - target;
      if (err > 0.0) hi = s; else lo = s;
      const double step = -0.5 * err * std::sqrt(G(r0 + s * s));
      s += step;
      if (std::abs(step) <= 4e-16 * std::max(s, 1e-300) || err == 0.0) {
        converged = true;
        break;
      }
    }
    if (!converged) throw Error(ErrorCode::nonconvergence, "arc-length inversion did not converge");
    if (s >= smax) throw Error(ErrorCode::out_of_interval, "rho beyond the chart interval");
    out[i] = r0 + s * s;
    rho_prev = rho_prev + arc_integral(s_prev, s);
    s_prev = s;
  }
  return out;
}

double WarpedGeometry::from_arclength(double rho) const {
  return from_arclength(std::vector<double>{rho})[0];
}

WarpedGeometry build_model(const ModelSpec& spec) { return WarpedGeometry(spec); }

ProfileJet eval_profile(const WarpedGeometry& geom, double coord) { return geom.eval(coord); }

double chart_to_arclength(const WarpedGeometry& geom, double coord) { return geom.to_arclength(coord); }

HorizonData horizon_data(const WarpedGeometry& geom) {
  if (!geom.has_horizon()) throw Error(ErrorCode::no_horizon, "geometry has no horizon");
  const int n = geom.dimension();
  const ProfileJet in = geom.eval_inner();
  if (!(in.h2 > 0.0)) throw Error(ErrorCode::non_regular_horizon, "h'' <= 0 at the horizon");
  HorizonData hd;
  hd.location = geom.horizon()->location;
  hd.h = in.h;
  hd.surface_gravity = in.h2;
  hd.integrand_limit = (n - 1) * in.h2 / in.h;

  // Naive evaluation of Delta f / f - f''/f off the horizon, extrapolated to 0.
  const double x0 = hd.location;
  const double span = std::isfinite(geom.upper()) ? geom.upper() - x0 : std::max(1.0, x0);
  const double eps0 = 1e-2 * std::min(span, std::max(x0, 1.0));
  std::vector<double> eps, vals;
  for (int k = 0; k <= 5; ++k) {
    const double e = eps0 * std::ldexp(1.0, -k);
    double h, h1, h2, h3;
    if (geom.spec().family == Family::custom_profile) {
      const auto j = geom.spec().custom(x0 + e);
      h = j[0], h1 = j[1], h2 = j[2], h3 = j[3];
    } else {
      const ProfileJet p = geom.eval(x0 + e);
      h = p.h, h1 = p.h1, h2 = p.h2, h3 = p.h3;
    }
    const double lap_f = h3 + (n - 1) * (h1 / h) * h2;
    eps.push_back(e);
    vals.push_back(lap_f / h1 - h3 / h1);
  }
  hd.integrand_limit_oracle = richardson::neville_at_zero(eps, vals);
  hd.oracle_rel_diff = std::abs(hd.integrand_limit_oracle - hd.integrand_limit) /
                       std::max(std::abs(hd.integrand_limit), 1e-300);
  return hd;
}

}  // namespace substatic
