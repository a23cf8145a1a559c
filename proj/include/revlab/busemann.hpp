#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "revlab/distance.hpp"
#include "revlab/surface.hpp"

namespace revlab {

// Geodesic from (t0, theta0) with launch angle phi0; t0 == 0 is the meridian
// theta0 leaving the pole.
struct Ray {
  double t0 = 0.0;
  double theta0 = 0.0;
  double phi0 = 0.0;
};

Point point_on(const SurfaceModel& S, const Ray& ray, double s);

struct RayCertificate {
  Ray ray;
  double horizon = 0.0;
  double residual = 0.0;  // max |d(ray(0), ray(s)) - s| over the samples
  bool certified = false;
  std::optional<double> first_failure;  // first sampled s with residual above tol
  int samples = 0;
};

// Checks d(ray(0), ray(s)) = s at s = horizon 2^-k, k = samples-1 .. 0.
RayCertificate is_ray(const SurfaceModel& S, const Ray& ray, double horizon, double tol = 1e-6, int samples = 12);

struct BusemannOptions {
  std::optional<double> eps;  // default 1e-5 (1 + d(x, ray(0)))
  double horizon_fraction = 0.5;  // largest T as a fraction of t_max
  DistanceOptions distance;
};

struct BusemannEstimate {
  double value = 0.0;
  double lower = 0.0;  // b_T = T - d(x, ray(T)) at the last T
  double upper = 0.0;  // d(x, ray(0))
  double horizon = 0.0;
  double increment = 0.0;  // change of the extrapolated value at the last doubling
  int doublings = 0;
  bool exhausted = false;  // stopped by the horizon, not by eps
};

// b_T is non-decreasing with b_T = F - a/T + O(T^-2) for the surfaces in
// scope, so the value is the Richardson estimate 2 b_2T - b_T clamped to
// [b_T, d(x, ray(0))], and doubling stops once that estimate moves by < eps.
BusemannEstimate busemann(const SurfaceModel& S, const Ray& ray, Point x, const BusemannOptions& options = {});

struct LemmaPlan {
  double r1_tol = 1e-9;
  int r2_fan = 256;         // launch angles per candidate radius
  double r2_growth = 1.25;  // ratio between candidate radii
  int r2_candidates = 48;
  int r3_radii = 16;
  double r3_span = 64.0;  // sampled x radii reach r3_span * r2 (capped at 0.8 t_max)
  int r3_angles = 16;
};

struct AngleSample {
  double x_t = 0.0, x_theta = 0.0;
  double angle = 0.0;  // at q between the meridian to the pole and the minimal geodesic to x
};

struct LemmaConstants {
  double lambda0 = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
  bool r3_found = false;
  double c = 0.0, bound = 0.0;
  double tail_at_r1 = 0.0;
  // r2 search
  int r2_rays = 0;            // directions classified as rays at r2
  int r2_unclassified = 0;    // directions left undecided by the horizon
  double r2_min_ray_t = 0.0;  // smallest t reached by those rays
  int r2_radii_tried = 0;
  // r3 search, q = (r2, 0)
  std::vector<AngleSample> r3_samples;
  double r3_min_margin = 0.0;  // min angle - (pi/2 + lambda0) over samples beyond r3
};

LemmaConstants lemma_constants(const SurfaceModel& S, const LemmaPlan& plan = {});

// Angle at q between the meridian towards the pole and the minimal geodesics
// to x (the smallest over all minimizers).
double angle_to_pole(const SurfaceModel& S, Point q, Point x, const DistanceOptions& options = {});

struct RayDirectionSet {
  Point p;
  std::vector<double> directions;  // launch angles in (-pi, pi]
  std::vector<bool> is_ray;
  std::vector<bool> decided;
  double diameter = 0.0;  // largest angular distance between sampled ray directions
  double resolution = 0.0;
};

// Directions at p that are rays. At the pole every meridian is one; elsewhere
// a direction is a ray when its geodesic has no cut point.
RayDirectionSet ray_directions(const SurfaceModel& S, Point p, int resolution = 256);

// Directions of A_p (sampled) farther than delta from every member of family.
std::vector<double> uncovered_directions(const RayDirectionSet& A, const std::vector<double>& family, double delta);

// Direction at the pole of the limit of minimal segments to ray(2^i).
double pole_direction(const SurfaceModel& S, const Ray& ray);

struct GrowthPlan {
  int samples = 100;
  double r_hi_factor = 16.0;  // q radii drawn in (r2, r_hi_factor r2]
  double tol = 1e-3;
  double delta0 = 3.141592653589793;
  std::uint64_t seed = 1;
  bool asymptotic = true;
  BusemannOptions busemann;
};

struct GrowthSample {
  double q_t = 0.0, q_theta = 0.0;
  double F_q = 0.0, F_a = 0.0;  // F(q) and F(alpha(r2))
  double rhs = 0.0;             // (d(p, q) - r2) sin lambda0
  double margin = 0.0;          // F_q - F_a - rhs
  std::optional<double> asymptotic_angle;
  bool asymptotic_converged = false;
};

struct GrowthReport {
  std::vector<GrowthSample> samples;
  int filtered = 0;  // q outside the delta0 direction condition
  int violations = 0;
  int angle_violations = 0;
  double min_margin = 0.0;
  double min_angle_margin = 0.0;
};

// p is the pole; alpha is the meridian through q.
GrowthReport growth_check(const SurfaceModel& S, const Ray& ray, const LemmaConstants& constants,
                          const GrowthPlan& plan = {});

struct ExhaustionPlan {
  std::vector<double> radii;
  int angles = 32;
  double slope_min = 0.0;
  double tol = 1e-3;
  double delta0 = 3.141592653589793;
  BusemannOptions busemann;
};

struct ExhaustionPoint {
  double R = 0.0;
  double m = 0.0;
  double theta_min = 0.0;
};

struct ExhaustionViolation {
  double R1 = 0.0, R2 = 0.0;
  double slope = 0.0;
};

struct ExhaustionReport {
  std::vector<ExhaustionPoint> series;
  std::vector<ExhaustionViolation> violations;
  double min_slope = 0.0;
  // Sampled angles along which max_i F_i does not grow from the first to the
  // last radius.
  std::vector<double> non_growing;
};

// m(R) = min over the circle t = R of max_i F_i. Throws CoveringFailed when
// the pole directions of the rays do not delta0-cover the circle.
ExhaustionReport exhaustion_check(const SurfaceModel& S, const std::vector<Ray>& rays, const ExhaustionPlan& plan);

}  // namespace revlab
