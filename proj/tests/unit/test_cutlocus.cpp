#include <cmath>
#include <numbers>

#include "doctest.h"
#include "revlab/cutlocus.hpp"
#include "revlab/distance.hpp"
#include "revlab/errors.hpp"

using namespace revlab;

namespace {
constexpr double kPi = std::numbers::pi;

// The distance to a cut point equals the cut distance and, for a crossing,
// is realized by the geodesic and its mirror image.
void check_cut_point(const SurfaceModel& S, double t0, const CutDistance& c) {
  REQUIRE(c.s_cut);
  const DistanceResult r = distance(S, {t0, 0.0}, {c.t_cut, c.theta_cut});
  CHECK(r.d == doctest::Approx(*c.s_cut).epsilon(1e-7));
  for (const Minimizer& m : r.minimizers) {
    const GeodesicPath p = minimizer_path(S, {t0, 0.0}, m);
    CHECK(p.end().t == doctest::Approx(c.t_cut).epsilon(1e-7));
    CHECK(std::abs(wrap_angle(p.end().theta - c.theta_cut)) < 1e-7);
  }
  if (c.cause == CutCause::kCrossing) {
    REQUIRE(r.minimizers.size() == 2);
    CHECK(std::abs(r.minimizers[0].phi0) == doctest::Approx(c.phi0).epsilon(1e-6));
    CHECK(std::abs(r.minimizers[1].phi0) == doctest::Approx(c.phi0).epsilon(1e-6));
  }
}
}  // namespace

TEST_CASE("plane and hyperbolic plane have no cut points") {
  for (const char* name : {"plane", "hyperbolic"}) {
    CAPTURE(name);
    const CutReport rep = cut_locus(catalog(name), 2.0, 128);
    CHECK(rep.points.empty());
    CHECK(rep.beyond_horizon.empty());
    CHECK(rep.structure == CutStructure::kEmpty);
    CHECK(rep.records.size() == 128);
  }
}

TEST_CASE("paraboloid cut locus is a subray of the opposite meridian") {
  const SurfaceModel S = catalog("paraboloid");
  const CutReport rep = cut_locus(S, 2.0, 128);
  REQUIRE_FALSE(rep.points.empty());
  CHECK(rep.structure == CutStructure::kOppositeMeridianSubray);
  for (const CutPoint& p : rep.points) CHECK(std::abs(wrap_angle(p.theta - kPi)) < 1e-6);
  REQUIRE(rep.endpoint_t);
  for (const CutPoint& p : rep.points) CHECK(p.t >= *rep.endpoint_t - 1e-9);
}

TEST_CASE("distance to a cut point equals the cut distance") {
  const SurfaceModel par = catalog("paraboloid");
  check_cut_point(par, 2.0, cut_distance(par, 2.0, kPi / 3));
  check_cut_point(par, 2.0, cut_distance(par, 2.0, 2.0));
  const SurfaceModel cone = catalog("smoothed_cone", {{"a", 0.25}});
  const CutDistance c = cut_distance(cone, 3.0, 1.0);
  CHECK(c.cause == CutCause::kCrossing);
  check_cut_point(cone, 3.0, c);
}

TEST_CASE("geodesics of the cone that cross the flat part are extrapolated") {
  const SurfaceModel cone = catalog("smoothed_cone", {{"a", 0.25}});
  // A launch angle phi0 sweeps phi0 / a in theta at most; below pi a the
  // geodesic never reaches the opposite meridian.
  const CutDistance none = cut_distance(cone, 3.0, 0.05);
  CHECK_FALSE(none.s_cut);
  CHECK(none.extrapolated);
  const CutDistance c = cut_distance(cone, 3.0, 0.8);
  REQUIRE(c.s_cut);
  CHECK(c.extrapolated);
  CHECK(c.theta_cut == doctest::Approx(kPi));
  check_cut_point(cone, 3.0, c);
}

TEST_CASE("sector condition") {
  CHECK(max_admissible_delta(catalog("plane"), {.radii = 3, .angles = 4, .fan = 64}).delta0 == kPi);
  SectorPlan plan{.radii = 3, .angles = 8, .fan = 128};
  const SectorSampler sampler(catalog("smoothed_cone", {{"a", 0.25}}), plan);
  CHECK(sampler.admissible(kPi).admissible);
}

TEST_CASE("argument checks") {
  const SurfaceModel S = catalog("plane");
  CHECK_THROWS_AS(cut_distance(S, 0.0, 1.0), BadParameter);
  CHECK_THROWS_AS(cut_distance(S, 1.0, kPi), BadParameter);
  CHECK_THROWS_AS(sector_admissible(S, 4.0), BadParameter);
  CHECK(to_string(CutCause::kConjugate) == "conjugate");
  CHECK(to_string(CutStructure::kOppositeMeridianSubray) == "opposite_meridian_subray");
}
