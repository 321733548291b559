#include <cmath>
#include <doctest.h>

#include "substatic/convergence.hpp"
#include "substatic/errors.hpp"

using namespace substatic;

namespace {

Problem schwarzschild() {
  Problem p;
  p.model.family = Family::schwarzschild;
  p.model.dimension = 3;
  p.model.mass = 1.0;
  p.domain.inner = RadialDomain::Inner::horizon;
  p.domain.outer_coord = 4.0;
  return p;
}

Problem ellipse() {
  Problem p;
  p.kind = Problem::Kind::fem;
  p.shape = {DomainShape::Kind::ellipse, 1.5, 1.0};
  return p;
}

}  // namespace

TEST_CASE("resolution ladders") {
  CHECK(geometric_resolutions(schwarzschild(), 65, 3) == std::vector<int>{65, 129, 257});
  CHECK(geometric_resolutions(ellipse(), 8, 3) == std::vector<int>{8, 16, 32});
}

TEST_CASE("fewer than three levels is an error") {
  try {
    run_levels(schwarzschild(), {129, 257});
    FAIL("accepted two levels");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::insufficient_levels);
  }
  CHECK_THROWS_AS(refine_and_extrapolate(schwarzschild(), 65, 2), Error);
}

TEST_CASE("radial flux converges at second order and residuals shrink") {
  const auto rep = refine_and_extrapolate(schwarzschild(), 129, 4);
  CHECK(rep.flux_order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rep.c_used == doctest::Approx(8.0 / 3.0));
  CHECK(rep.residual_orders.at("main_integral_identity") >= 1.8);
  CHECK(rep.residual_orders.at("volume_balance") >= 1.8);
  for (const auto& r : rep.extrapolated) {
    CAPTURE(r.name);
    CHECK(r.residual_rel <= 1e-6);
  }
  for (const auto& lv : rep.levels) CHECK(lv.hopf.positivity_ok);
}

TEST_CASE("exact discrete solutions report an infinite order") {
  Problem p;
  p.model.family = Family::flat;
  p.model.dimension = 2;
  p.domain.outer_coord = 1.0;
  const auto rep = run_levels(p, {64, 128, 256});
  CHECK(std::isinf(rep.flux_order));
  CHECK(std::isinf(rep.residual_orders.at("volume_balance")));
}

TEST_CASE("ellipse: Galerkin energy decreases and residuals fall") {
  const auto rep = refine_and_extrapolate(ellipse(), 8, 3);
  CHECK(rep.energy_monotone);
  for (std::size_t i = 0; i < rep.levels.front().identities.size(); ++i) {
    for (std::size_t l = 1; l < rep.levels.size(); ++l) {
      CHECK(rep.levels[l].identities[i].residual_abs < rep.levels[l - 1].identities[i].residual_abs);
    }
  }
  for (const auto& r : rep.extrapolated) {
    CAPTURE(r.name);
    CHECK(r.residual_rel <= 1e-2);
  }
}

TEST_CASE("primitive extrapolation removes the second-order term") {
  RadialPrimitives a, b;
  a.nodes = 129;
  b.nodes = 257;
  a.flux = 1.0 + 4e-4;
  b.flux = 1.0 + 1e-4;
  CHECK(extrapolate(std::vector<RadialPrimitives>{a, b}).flux == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(extrapolate(std::vector<RadialPrimitives>{a}), Error);
}
