#include <cmath>
#include <numbers>

#include "doctest.h"
#include "revlab/distance.hpp"
#include "revlab/errors.hpp"
#include "revlab/geodesic.hpp"
#include "revlab/parallel.hpp"

using namespace revlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("plane geodesics are straight lines") {
  const SurfaceModel S = catalog("plane");
  const double L = 7.5;
  const GeodesicPath p = shoot(S, 1.0, 0.0, kPi / 2, L);
  CHECK(p.end().t == doctest::Approx(std::hypot(1.0, L)).epsilon(1e-11));
  CHECK(p.end().theta == doctest::Approx(std::atan2(L, 1.0)).epsilon(1e-11));
  CHECK(p.nu == doctest::Approx(1.0));
  CHECK(p.length == doctest::Approx(L));
}

TEST_CASE("the inward meridian passes through the pole") {
  const SurfaceModel S = catalog("paraboloid");
  const GeodesicPath p = shoot(S, 1.0, 0.3, kPi, 3.0);
  CHECK(p.end().t == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(wrap_angle(p.end().theta - 0.3 - kPi) == doctest::Approx(0.0).epsilon(1e-12));
  const GeodesicPath m = meridian(S, 1.0, 4.0);
  CHECK(m.end().t == doctest::Approx(4.0));
  CHECK(m.end().theta == doctest::Approx(1.0));
}

TEST_CASE("Clairaut constant and unit speed are conserved") {
  for (const char* name : {"paraboloid", "smoothed_cone", "bump", "spike"}) {
    CAPTURE(name);
    const SurfaceModel S = catalog(name);
    for (double phi : {0.2, 1.0, 2.0, 3.0, -1.3}) {
      const GeodesicPath p = shoot(S, 2.5, 0.0, phi, 25.0);
      CHECK(std::max(p.clairaut_drift, p.speed_drift) / p.length < 1e-8);
      CHECK(p.nu == doctest::Approx(S.f(2.5) * std::sin(phi)).epsilon(1e-14));
    }
  }
}

TEST_CASE("steps never jump over narrow spikes") {
  // Spike widths shrink quickly; a stepper blind to them loses the invariants.
  const SurfaceModel S = catalog("spike");
  const GeodesicPath p = shoot(S, 6.4320, 0.0, 0.6733, 14.044);
  CHECK(std::max(p.clairaut_drift, p.speed_drift) / p.length < 1e-8);
}

TEST_CASE("conjugate point on the unit sphere lies at pi") {
  const SurfaceModel S = catalog("constant", {{"k", 1.0}}, 3.0);
  const GeodesicPath p = shoot(S, 1.0, 0.0, kPi / 2, 3.5);
  const auto s = conjugate_point(S, p);
  REQUIRE(s);
  CHECK(*s == doctest::Approx(kPi).epsilon(1e-9));
  CHECK_FALSE(conjugate_point(catalog("plane"), shoot(catalog("plane"), 1.0, 0.0, 1.0, 50.0)));
}

TEST_CASE("domain exits") {
  const SurfaceModel S = catalog("hyperbolic");
  const GeodesicPath p = shoot(S, 1.0, 0.0, 0.0, 20.0);
  CHECK(p.truncated);
  CHECK(p.end().t == doctest::Approx(S.t_max()));
  ShootOptions strict;
  strict.strict = true;
  CHECK_THROWS_AS(shoot(S, 1.0, 0.0, 0.5, 20.0, strict), LeftDomain);
}

TEST_CASE("angles under the metric") {
  const SurfaceModel S = catalog("plane");
  CHECK(angle_between(S, 2.0, 1.0, 0.0, 0.0, 1.0) == doctest::Approx(kPi / 2));
  // (0, 1) at t = 2 has length 2, so (2, 1) makes 45 degrees with the meridian.
  CHECK(angle_between(S, 2.0, 1.0, 0.0, 2.0, 1.0) == doctest::Approx(kPi / 4));
  CHECK_THROWS_AS(angle_between(S, 2.0, 0.0, 0.0, 1.0, 0.0), ZeroVector);
  CHECK(heading(S, 2.0, 0.0, 0.5) == doctest::Approx(kPi / 2));
}

TEST_CASE("parallel_for keeps per-index results and reports the lowest failure") {
  std::vector<int> out(1000, -1);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i % 97));
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 60) throw BadParameter(std::to_string(i));
    });
    FAIL("no exception");
  } catch (const BadParameter& e) {
    CHECK(std::string(e.what()).find("17") != std::string::npos);
  }
  CHECK(worker_count() >= 1);
}
