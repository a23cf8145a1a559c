#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "revlab/errors.hpp"
#include "revlab/surface.hpp"

using namespace revlab;

namespace {
constexpr double kPi = std::numbers::pi;
const std::vector<std::string> kCatalog{"plane", "hyperbolic", "paraboloid", "smoothed_cone", "bump", "spike"};
}  // namespace

TEST_CASE("plane warp is the identity") {
  const SurfaceModel S = catalog("plane");
  for (double t : {1e-3, 0.5, 3.0, 40.0}) {
    CHECK(S.f(t) == doctest::Approx(t).epsilon(1e-13));
    CHECK(S.at(t).fp == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("G = -1 reproduces sinh") {
  const SurfaceModel S = catalog("hyperbolic", {}, 10.0);
  double worst = 0.0;
  for (int i = 1; i <= 2000; ++i) {
    const double t = 10.0 * i / 2000;
    worst = std::max(worst, std::abs(S.f(t) / std::sinh(t) - 1.0));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("smoothed cone follows its closed form") {
  const SurfaceModel S = catalog("smoothed_cone", {{"a", 0.25}});
  for (double t : {0.1, 1.0, 5.0, 50.0}) {
    CHECK(S.f(t) == doctest::Approx(catalog_forms::smoothed_cone_f(0.25, t)).epsilon(1e-9));
    CHECK(S.at(t).fp == doctest::Approx(catalog_forms::smoothed_cone_fp(0.25, t)).epsilon(1e-9));
  }
  CHECK(S.total_curvature().c_limit == doctest::Approx(1.5 * kPi).epsilon(1e-9));
}

TEST_CASE("a closing surface is rejected at the zero of f") {
  CHECK_THROWS_AS(catalog("constant", {{"k", 1.0}}, 4.0), WarpVanishes);
  try {
    catalog("constant", {{"k", 1.0}}, 4.0);
  } catch (const WarpVanishes& e) {
    CHECK(e.t_star() == doctest::Approx(kPi).epsilon(1e-8));
  }
  CHECK_NOTHROW(catalog("constant", {{"k", 1.0}}, 3.0));
}

TEST_CASE("bad parameters") {
  CHECK_THROWS_AS(catalog("torus"), BadParameter);
  CHECK_THROWS_AS(catalog("constant", {{"k", -1.0}}), BadParameter);
  CHECK_THROWS_AS(catalog("plane", {}, -1.0), BadParameter);
  CHECK_THROWS_AS(catalog("plane", {}, 10.0, 0.5), BadParameter);
}

TEST_CASE("total curvature identity holds on the catalog") {
  for (const std::string& name : kCatalog) {
    CAPTURE(name);
    const SurfaceModel S = catalog(name);
    const TotalCurvature tc = S.total_curvature();
    CHECK(S.identity_residual() < 1e-6);
    CHECK(tc.c_limit <= 2.0 * kPi + 1e-6);
    CHECK(std::abs(tc.c_limit - tc.c_integral) <= tc.bound + 1e-12);
    // Tail is non-increasing and vanishes at the horizon.
    double prev = S.tail_integral(0.0);
    for (int k = 1; k <= 16; ++k) {
      const double now = S.tail_integral(S.t_max() * k / 16);
      CHECK(now <= prev + 1e-15);
      prev = now;
    }
    CHECK(prev == 0.0);
    const SignedIntegrals si = S.signed_curvature_integrals();
    CHECK(si.plus >= 0.0);
    CHECK(si.minus <= 0.0);
  }
}

TEST_CASE("paraboloid total curvature tends to 2 pi") {
  const TotalCurvature tc = catalog("paraboloid", {}, 50.0).total_curvature();
  CHECK(std::abs(tc.c_extrapolated - 2.0 * kPi) < 1e-2);
  // The raw horizon value is far off; that is what the extrapolation is for.
  CHECK(tc.c_limit < tc.c_extrapolated);
  CHECK(tc.tail_at_half > 0.0);
}

TEST_CASE("von Mangoldt classification") {
  CHECK(catalog("paraboloid").is_von_mangoldt());
  CHECK(catalog("plane").is_von_mangoldt());
  const SurfaceModel bump = catalog("bump");
  CHECK_FALSE(bump.is_von_mangoldt());
  REQUIRE(bump.von_mangoldt_witness());
  const auto [t1, t2] = *bump.von_mangoldt_witness();
  CHECK(t1 < t2);
  CHECK(bump.G(t1) < bump.G(t2));
}

TEST_CASE("flat radius of a cone") {
  const SurfaceModel S = catalog("smoothed_cone", {{"a", 0.25}});
  const double r = S.flat_radius(1.0, 1e-10);
  CHECK(r > 1.0);
  CHECK(S.tail_integral(r) < 1e-10);
  CHECK(catalog("plane").flat_radius(1.0, 1e-10) == doctest::Approx(1.0).epsilon(0.5));
}
