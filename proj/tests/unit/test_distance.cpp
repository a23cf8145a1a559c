#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "revlab/distance.hpp"
#include "revlab/errors.hpp"

using namespace revlab;

namespace {
constexpr double kPi = std::numbers::pi;

double plane_d(Point x, Point y) {
  return std::sqrt(std::max(0.0, x.t * x.t + y.t * y.t - 2 * x.t * y.t * std::cos(y.theta - x.theta)));
}
double hyperbolic_d(Point x, Point y) {
  return std::acosh(std::max(
      1.0, std::cosh(x.t) * std::cosh(y.t) - std::sinh(x.t) * std::sinh(y.t) * std::cos(y.theta - x.theta)));
}
}  // namespace

TEST_CASE("laws of cosines") {
  const SurfaceModel plane = catalog("plane"), hyp = catalog("hyperbolic");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> rad(0.05, 3.0), ang(-kPi, kPi);
  for (int i = 0; i < 20; ++i) {
    const Point x{rad(rng), ang(rng)}, y{rad(rng), ang(rng)};
    CHECK(distance(plane, x, y).d == doctest::Approx(plane_d(x, y)).epsilon(1e-9));
    CHECK(distance(hyp, x, y).d == doctest::Approx(hyperbolic_d(x, y)).epsilon(1e-9));
  }
}

TEST_CASE("distance is symmetric and reaches the pole along meridians") {
  const SurfaceModel S = catalog("paraboloid");
  const Point x{1.3, 0.4}, y{4.0, 2.9};
  CHECK(distance(S, x, y).d == doctest::Approx(distance(S, y, x).d).epsilon(1e-10));
  CHECK(distance(S, {0.0, 0.0}, {3.0, 1.0}).d == doctest::Approx(3.0));
  CHECK(distance(S, {3.0, 1.0}, {0.0, 0.0}).d == doctest::Approx(3.0));
  CHECK(distance(S, x, x).d == 0.0);
}

TEST_CASE("far opposite points on a cone have two minimizers") {
  const SurfaceModel S = catalog("smoothed_cone", {{"a", 0.25}});
  const DistanceResult r = distance(S, {3.0, 0.0}, {3.0, kPi});
  REQUIRE(r.minimizers.size() == 2);
  CHECK(r.minimizers[0].phi0 == doctest::Approx(-r.minimizers[1].phi0).epsilon(1e-7));
  for (const Minimizer& m : r.minimizers) CHECK(m.length == doctest::Approx(r.d).epsilon(1e-9));
  // Far from the tip the cone is flat with total angle pi/2.
  const DistanceResult far = distance(S, {200.0, 0.0}, {300.0, kPi / 2});
  const double rho1 = catalog_forms::smoothed_cone_f(0.25, 200.0) / 0.25;
  const double rho2 = catalog_forms::smoothed_cone_f(0.25, 300.0) / 0.25;
  const double flat = std::sqrt(rho1 * rho1 + rho2 * rho2 - 2 * rho1 * rho2 * std::cos(0.25 * kPi / 2));
  CHECK(far.d == doctest::Approx(flat).epsilon(1e-7));
}

TEST_CASE("minimizer paths end at the target") {
  const SurfaceModel S = catalog("bump");
  const Point x{1.0, 0.0}, y{5.0, 2.0};
  const DistanceResult r = distance(S, x, y);
  REQUIRE_FALSE(r.minimizers.empty());
  const GeodesicPath p = minimizer_path(S, x, r.minimizers.front());
  CHECK(p.end().t == doctest::Approx(y.t).epsilon(1e-8));
  CHECK(wrap_angle(p.end().theta - y.theta) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("triangles in the plane") {
  const SurfaceModel S = catalog("plane");
  const TriangleData T = triangle_from_apex(S, 2.0, 3.0, 1.0);
  CHECK(T.angle_p == doctest::Approx(1.0));
  CHECK(T.angle_p + T.angle_x + T.angle_y == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(T.c == doctest::Approx(plane_d({2.0, 0.0}, {3.0, 1.0})));
  const TriangleData C = comparison_triangle(S, 2.0, 3.0, T.c, kPi);
  CHECK(C.delta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(comparison_triangle(S, 2.0, 3.0, 5.5, kPi), Error);
}
