#include <cmath>
#include <doctest.h>

#include "substatic/curvature.hpp"
#include "substatic/errors.hpp"

using namespace substatic;

namespace {

WarpedGeometry model(Family fam, int n, double m = 0.0, double q = 0.0, double K = 0.0) {
  ModelSpec s;
  s.family = fam;
  s.dimension = n;
  s.mass = m;
  s.charge = q;
  s.ambient_curvature = K;
  return build_model(s);
}

struct Frozen {
  const char* name;
  WarpedGeometry geom;
  double coord, ric_r, ric_t, q_t;
};

}  // namespace

// Values produced by tests/oracles/warped_oracle.py (brute-force tensor calculus).
TEST_CASE("ricci and Q eigenvalues match the symbolic oracle") {
  const Frozen cases[] = {
      {"schwarzschild n3", model(Family::schwarzschild, 3, 1.0), 3.0, -0.074074074074074074, 0.037037037037037037, 0.0},
      {"schwarzschild n4", model(Family::schwarzschild, 4, 1.0), 2.0, -0.375, 0.125, 0.0},
      {"reissner-nordstrom", model(Family::reissner_nordstrom, 3, 1.0, 0.5), 3.0, -0.067901234567901234568,
       0.037037037037037037037, 0.0037094148924526638818},
      {"de sitter", model(Family::desitter_schwarzschild, 3, 0.1, 0.0, 1.0), 0.5, 0.4, 2.8, 0.0},
      {"anti de sitter", model(Family::ads_schwarzschild, 3, 1.0, 0.0, -1.0), 3.0, -2.0740740740740740741,
       -1.9629629629629629630, 0.0},
      {"hemisphere", model(Family::hemisphere, 3), 0.7, 2.0, 2.0, 0.0},
      {"hyperbolic", model(Family::hyperbolic, 3), 0.7, -2.0, -2.0, 0.0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const auto [rr, rt] = ricci_eigen(c.geom, c.coord);
    CHECK(std::abs(rr - c.ric_r) < 1e-13);
    CHECK(std::abs(rt - c.ric_t) < 1e-13);
    const auto [qr, qt] = q_eigen(c.geom, c.coord);
    CHECK(std::abs(qr) < 1e-13);
    CHECK(std::abs(qt - c.q_t) < 1e-13);
  }
}

TEST_CASE("mean curvature of slices") {
  const auto g = model(Family::schwarzschild, 3, 1.0);
  CHECK(mean_curvature_slice(g, 4.0) == doctest::Approx(2.0 * std::sqrt(0.5) / 4.0).epsilon(1e-14));
  const auto hs = model(Family::hemisphere, 2);
  CHECK(mean_curvature_slice(hs, M_PI / 3) == doctest::Approx(1.0 / std::tan(M_PI / 3)).epsilon(1e-14));
}

TEST_CASE("curvature at the horizon uses the regular limits") {
  const auto g = model(Family::schwarzschild, 3, 1.0);
  const CurvatureSample s = curvature_from_jet(g.eval_inner(), 3, 1.0);
  // Ric(nu, nu) = -(n-1) h''/h = -2 * (1/4)/2 at r = 2
  CHECK(s.ric_radial == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(std::abs(s.q_radial) < 1e-14);
}

TEST_CASE("brendle conditions on the catalog") {
  const ConditionReport s = check_brendle(model(Family::schwarzschild, 3, 1.0), 256);
  CHECK(s.h0.ok);
  CHECK(s.h1.ok);
  CHECK(s.h2.ok);
  CHECK(s.h3.ok);
  CHECK(s.h4.ok);
  CHECK(s.substatic_ok);
  CHECK(s.implication_ok);
  CHECK(s.max_abs_q < 1e-9);

  for (Family f : {Family::flat, Family::hemisphere, Family::hyperbolic}) {
    const ConditionReport r = check_brendle(model(f, 3), 256);
    CAPTURE(to_string(f));
    CHECK_FALSE(r.h4.ok);
    CHECK(r.substatic_ok);
    CHECK(r.max_abs_q < 1e-9);
  }
  CHECK_FALSE(check_brendle(model(Family::flat, 3), 64).h1.ok);

  const ConditionReport rn = check_brendle(model(Family::reissner_nordstrom, 3, 1.0, 0.5), 256);
  CHECK(rn.substatic_ok);
  CHECK(rn.min_q >= -1e-9);
  CHECK(rn.max_abs_q > 1e-4);  // substatic, not static
  CHECK(rn.implication_ok);

  CHECK_THROWS_AS(check_brendle(model(Family::flat, 3), 4), Error);
}
