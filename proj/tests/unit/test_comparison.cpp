#include <cmath>
#include <numbers>

#include "doctest.h"
#include "revlab/comparison.hpp"
#include "revlab/errors.hpp"

using namespace revlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("radial curvature domination") {
  const SurfaceModel plane = catalog("plane"), hyp = catalog("hyperbolic");
  const DominationCertificate d = radial_domination(plane, hyp);
  CHECK(d.certified);
  CHECK(d.margin == doctest::Approx(1.0));
  CHECK_FALSE(radial_domination(hyp, plane).certified);
  CHECK(radial_domination(hyp, hyp).certified);
  CHECK(radial_domination(catalog("paraboloid"), plane).certified);
}

TEST_CASE("plane angles dominate hyperbolic comparison angles") {
  const SurfaceModel plane = catalog("plane"), hyp = catalog("hyperbolic");
  TctOptions o;
  o.n = 24;
  const TctReport r = verify_tct(plane, hyp, kPi, o);
  CHECK(r.n == 24);
  CHECK(r.violations == 0);
  CHECK(r.anomalies == 0);
  CHECK(r.margins.min >= -1e-4);
  // Same seed, same triangles.
  const TctReport again = verify_tct(plane, hyp, kPi, o);
  for (int i = 0; i < r.n; ++i) CHECK(r.samples[i].margin == again.samples[i].margin);
  CHECK_THROWS_AS(verify_tct(hyp, plane, kPi, o), GateFailed);
}

TEST_CASE("equality case is tight") {
  const SurfaceModel hyp = catalog("hyperbolic");
  TctOptions o;
  o.n = 12;
  const TctReport r = verify_tct(hyp, hyp, kPi, o);
  for (const TctSample& s : r.samples) CHECK(std::abs(s.margin) < 1e-6);
}

TEST_CASE("nearest-rank quantiles") {
  std::vector<double> v;
  for (int i = 20; i >= 1; --i) v.push_back(i);
  const Quantiles q = quantiles(v);
  CHECK(q.min == 1.0);
  CHECK(q.p50 == 10.0);
  CHECK(q.p95 == 19.0);
  CHECK(quantiles({}).min == 0.0);
}
