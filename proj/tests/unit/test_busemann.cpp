#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "revlab/busemann.hpp"
#include "revlab/errors.hpp"

using namespace revlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("plane Busemann function of a meridian is t cos theta") {
  const SurfaceModel S = catalog("plane");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rad(0.1, 10.0), ang(-kPi, kPi);
  for (int i = 0; i < 8; ++i) {
    const Point x{rad(rng), ang(rng)};
    const BusemannEstimate e = busemann(S, Ray{}, x);
    CHECK(e.value == doctest::Approx(x.t * std::cos(x.theta)).epsilon(1e-4).scale(1.0));
    CHECK(e.lower <= e.value);
    CHECK(e.value <= e.upper);
    CHECK(e.upper == doctest::Approx(x.t));
  }
}

TEST_CASE("ray certificates") {
  const SurfaceModel plane = catalog("plane");
  CHECK(is_ray(plane, Ray{}, 40.0).certified);
  CHECK(is_ray(plane, Ray{2.0, 0.0, 1.0}, 40.0).certified);
  // On the paraboloid this geodesic meets its mirror image near s = 60.
  const SurfaceModel par = catalog("paraboloid");
  const RayCertificate c = is_ray(par, Ray{2.0, 0.0, kPi / 3}, 150.0);
  CHECK_FALSE(c.certified);
  REQUIRE(c.first_failure);
  CHECK(*c.first_failure > 60.0);
  CHECK(point_on(plane, Ray{}, 3.0).t == doctest::Approx(3.0));
}

TEST_CASE("angle to the pole") {
  const SurfaceModel S = catalog("plane");
  CHECK(angle_to_pole(S, {1.0, 0.0}, {3.0, 0.0}) == doctest::Approx(kPi));
  CHECK(angle_to_pole(S, {1.0, 0.0}, {1.0, kPi / 2}) == doctest::Approx(kPi / 4));
}

TEST_CASE("lemma constants of a quarter cone") {
  const SurfaceModel S = catalog("smoothed_cone", {{"a", 0.25}});
  const LemmaConstants L = lemma_constants(S);
  CHECK(L.lambda0 == doctest::Approx(kPi / 6).epsilon(1e-12));
  CHECK(S.tail_integral(L.r1) < L.lambda0);
  CHECK(L.r2 > L.r1);
  CHECK(L.r2_min_ray_t > L.r1);
  CHECK(L.r3_found);
  CHECK(L.r3 > L.r2);
  CHECK(L.r3_min_margin >= -1e-3);
  CHECK_THROWS_AS(lemma_constants(catalog("plane")), TotalCurvatureNotAbovePi);
}

TEST_CASE("ray directions") {
  const SurfaceModel S = catalog("plane");
  const RayDirectionSet pole = ray_directions(S, {0.0, 0.0}, 32);
  CHECK(pole.diameter == doctest::Approx(kPi));
  const RayDirectionSet A = ray_directions(S, {2.0, 0.0}, 32);
  for (bool r : A.is_ray) CHECK(r);
  CHECK(uncovered_directions(A, {0.0}, kPi).empty());
  CHECK_FALSE(uncovered_directions(A, {0.0}, 0.5).empty());
}

TEST_CASE("growth and exhaustion on the cone, and the plane control") {
  const SurfaceModel S = catalog("smoothed_cone", {{"a", 0.25}});
  const LemmaConstants L = lemma_constants(S);
  GrowthPlan gp;
  gp.samples = 8;
  const GrowthReport g = growth_check(S, Ray{}, L, gp);
  CHECK(g.samples.size() == 8);
  CHECK(g.violations == 0);

  ExhaustionPlan ep;
  ep.radii = {L.r2, 2 * L.r2, 4 * L.r2, 8 * L.r2};
  ep.angles = 12;
  ep.slope_min = std::sin(L.lambda0);
  const ExhaustionReport e = exhaustion_check(S, {Ray{}}, ep);
  CHECK(e.violations.empty());
  CHECK(e.min_slope >= ep.slope_min - 1e-3);

  const ExhaustionReport ctrl = exhaustion_check(catalog("plane"), {Ray{}}, ep);
  CHECK_FALSE(ctrl.non_growing.empty());
  CHECK_FALSE(ctrl.violations.empty());
}

TEST_CASE("a covering needs enough rays") {
  ExhaustionPlan ep;
  ep.radii = {1.0, 2.0};
  ep.delta0 = 0.5;
  CHECK_THROWS_AS(exhaustion_check(catalog("plane"), {Ray{}}, ep), CoveringFailed);
}
