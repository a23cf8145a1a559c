#pragma once

#include <optional>
#include <vector>

#include "revlab/geodesic.hpp"
#include "revlab/kernels/fan_step.hpp"
#include "revlab/surface.hpp"

namespace revlab {

struct Point {
  double t = 0.0;
  double theta = 0.0;
};

// A minimal geodesic from x to y, described by its launch angle at x and its
// tangent on arrival at y. For x at the pole phi0 is the meridian angle of y.
struct Minimizer {
  double phi0 = 0.0;  // signed, as in shoot()
  double nu = 0.0;
  double length = 0.0;
  double end_u = 0.0;  // dt/ds at y
  double end_w = 0.0;  // dtheta/ds at y
  double target = 0.0;  // unwrapped theta travelled (reduced frame), for continuation
};

struct DistanceResult {
  double d = 0.0;
  std::vector<Minimizer> minimizers;  // sorted by phi0
};

struct DistanceOptions {
  int n_scan = 720;
  double equal_rel = 1e-9;
  int max_windings = 8;
  kernels::Isa isa = kernels::active_isa();
};

double wrap_angle(double a);  // to (-pi, pi]

DistanceResult distance(const SurfaceModel& S, Point x, Point y, const DistanceOptions& options = {});

// Continuation variant: searches launch angles within half_width of
// phi_guess (reduced frame, unwrapped target as recorded by a previous
// Minimizer) and falls back to the global scan when nothing is found.
DistanceResult distance_local(const SurfaceModel& S, Point x, Point y, const Minimizer& guess, double half_width,
                              const DistanceOptions& options = {});

GeodesicPath minimizer_path(const SurfaceModel& S, Point x, const Minimizer& m);

struct TriangleData {
  double a = 0.0, b = 0.0, c = 0.0;  // d(p,x), d(p,y), d(x,y)
  double angle_p = 0.0, angle_x = 0.0, angle_y = 0.0;
  double delta = 0.0;  // apex separation
};

// Places x = (a, 0), y = (b, delta) and measures the geodesic triangle with
// the pole.
TriangleData triangle_from_apex(const SurfaceModel& S, double a, double b, double delta,
                                const DistanceOptions& options = {});

struct ComparisonOptions {
  int bracket_samples = 8;
  double delta_tol = 1e-12;
  DistanceOptions distance;
};

// Finds delta in (0, delta0] with d((a,0), (b,delta)) = c, checking that
// delta -> d is increasing on the bracketing samples.
TriangleData comparison_triangle(const SurfaceModel& S, double a, double b, double c, double delta0,
                                 const ComparisonOptions& options = {});

}  // namespace revlab
