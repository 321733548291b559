#include <cmath>
#include <doctest.h>

#include "substatic/errors.hpp"
#include "substatic/models.hpp"

using namespace substatic;

namespace {

ModelSpec schwarzschild(int n, double m) {
  ModelSpec s;
  s.family = Family::schwarzschild;
  s.dimension = n;
  s.mass = m;
  return s;
}

ErrorCode code_of(const ModelSpec& s) {
  try {
    build_model(s);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("schwarzschild profile in the area-radius chart") {
  const WarpedGeometry g = build_model(schwarzschild(3, 1.0));
  REQUIRE(g.has_horizon());
  CHECK(g.chart() == Chart::area_radius);
  CHECK(g.horizon()->location == doctest::Approx(2.0).epsilon(1e-14));
  const ProfileJet p = g.eval(4.0);
  CHECK(p.h == 4.0);
  CHECK(p.f == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(p.h2 == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(p.h2_over_h == doctest::Approx(0.0625 / 4.0).epsilon(1e-15));
}

TEST_CASE("arc length matches the closed form and inverts") {
  const double m = 1.0;
  for (double r : {2.5, 4.0, 11.0}) {
    const WarpedGeometry g = build_model(schwarzschild(3, m));
    const double closed = std::sqrt(r * (r - 2 * m)) + 2 * m * std::log(std::sqrt(r) + std::sqrt(r - 2 * m)) -
                          2 * m * std::log(std::sqrt(2 * m));
    const double rho = g.to_arclength(r);
    CHECK(std::abs(rho - closed) <= 1e-12 * closed);
    CHECK(std::abs(g.from_arclength(rho) - r) <= 1e-12 * r);
  }
  const WarpedGeometry g = build_model(schwarzschild(3, m));
  const auto rs = g.from_arclength(std::vector<double>{0.0, 1.0, 2.0, 4.5911742987852771});
  CHECK(rs[0] == doctest::Approx(2.0));
  CHECK(rs[3] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("horizon data: surface gravity and integrand limit against the eps oracle") {
  const HorizonData hd = horizon_data(build_model(schwarzschild(3, 1.0)));
  CHECK(hd.surface_gravity == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(hd.integrand_limit == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(hd.oracle_rel_diff < 1e-8);

  ModelSpec ds = schwarzschild(3, 0.1);
  ds.family = Family::desitter_schwarzschild;
  ds.ambient_curvature = 1.0;
  const HorizonData hds = horizon_data(build_model(ds));
  CHECK(hds.oracle_rel_diff < 1e-8);
}

TEST_CASE("higher-dimensional and charged horizons") {
  CHECK(build_model(schwarzschild(4, 1.0)).horizon()->location == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  ModelSpec rn = schwarzschild(3, 1.0);
  rn.family = Family::reissner_nordstrom;
  rn.charge = 0.5;
  CHECK(build_model(rn).horizon()->location == doctest::Approx(1.0 + std::sqrt(0.75)).epsilon(1e-13));
  rn.charge = 1.0;
  CHECK(code_of(rn) == ErrorCode::non_regular_horizon);
  rn.charge = 0.5;
  rn.dimension = 4;
  CHECK(code_of(rn) == ErrorCode::invalid_dimension);
}

TEST_CASE("space forms in arc length") {
  ModelSpec s;
  s.family = Family::hemisphere;
  s.dimension = 3;
  const WarpedGeometry g = build_model(s);
  CHECK(g.space_form_curvature() == 1.0);
  CHECK(g.upper() == doctest::Approx(M_PI / 2));
  const ProfileJet p = g.eval(0.7);
  CHECK(p.h == doctest::Approx(std::sin(0.7)));
  CHECK(p.f == doctest::Approx(std::cos(0.7)));
  CHECK(p.f2_over_f == doctest::Approx(-1.0));

  s.family = Family::hyperbolic;
  const WarpedGeometry hg = build_model(s);
  CHECK(hg.space_form_curvature() == -1.0);
  CHECK(hg.eval(0.7).h == doctest::Approx(std::sinh(0.7)));
  CHECK(std::isinf(hg.upper()));
}

TEST_CASE("invalid specs are rejected") {
  ModelSpec s = schwarzschild(3, 1.0);
  s.cross_section_constant = 0.5;
  CHECK(code_of(s) == ErrorCode::invalid_argument);
  s = schwarzschild(1, 1.0);
  CHECK(code_of(s) == ErrorCode::invalid_dimension);
  s = schwarzschild(3, -1.0);
  CHECK_THROWS_AS(build_model(s), Error);
  CHECK_THROWS_AS(family_from_string("kerr"), Error);
  CHECK(family_from_string("ads_schwarzschild") == Family::ads_schwarzschild);
  const WarpedGeometry g = build_model(schwarzschild(3, 1.0));
  CHECK_THROWS_AS(g.eval(1.0), Error);
}

TEST_CASE("custom profile reproduces the catalog profile away from the horizon") {
  const WarpedGeometry ref = build_model(schwarzschild(3, 1.0));
  ModelSpec c;
  c.family = Family::custom_profile;
  c.dimension = 3;
  c.custom_horizon = true;
  c.custom_end = ref.to_arclength(10.0);
  c.custom = [&ref](double rho) {
    const ProfileJet p = ref.eval_rho(rho);
    return std::array<double, 4>{p.h, p.h1, p.h2, p.h3};
  };
  const WarpedGeometry g = build_model(c);
  for (double rho : {0.3, 1.0, 3.0}) {
    const ProfileJet a = g.eval(rho), b = ref.eval_rho(rho);
    CHECK(a.potential(3) == doctest::Approx(b.potential(3)).epsilon(1e-10));
  }
  // inside the blend the potential stays close to the exact horizon value
  const double exact = ref.eval_inner().potential(3);
  CHECK(std::abs(g.eval_rho(0.5 * c.blend_delta).potential(3) - exact) < 1e-6);
  CHECK(std::abs(g.eval_inner().potential(3) - exact) < 1e-6);
}
