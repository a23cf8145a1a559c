#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "revlab/ode.hpp"
#include "revlab/surface.hpp"

namespace revlab {

struct GeodesicState {
  double s;
  double t;
  double theta;  // unwrapped
  double u;      // dt/ds
  double w;      // dtheta/ds
};

struct GeodesicPath {
  std::vector<GeodesicState> states;
  double nu = 0.0;  // Clairaut constant f^2 w
  double length = 0.0;
  double t0 = 0.0, theta0 = 0.0, phi0 = 0.0;
  bool truncated = false;  // stopped at t = t_max before reaching `length`
  double clairaut_drift = 0.0;  // max |f^2 w - nu| over samples
  double speed_drift = 0.0;     // max |u^2 + f^2 w^2 - 1| over samples

  const GeodesicState& end() const { return states.back(); }
};

struct ShootOptions {
  bool strict = false;  // throw LeftDomain instead of truncating
  ode::Tolerance tol{1e-12, 1e-14};
  bool record = true;
};

// Unit-speed geodesic from (t0, theta0) leaving at angle phi0 in [-pi, pi] to
// the outward meridian (positive towards increasing theta). phi0 = 0 and
// phi0 = +-pi are meridians and are produced in closed form; the inward one
// passes through the pole onto the meridian theta0 + pi.
GeodesicPath shoot(const SurfaceModel& S, double t0, double theta0, double phi0, double length,
                   const ShootOptions& options = {});

// The meridian t -> (t, theta) from the pole.
GeodesicPath meridian(const SurfaceModel& S, double theta, double length);

// First zero of the Jacobi field y'' + G(t(s)) y = 0, y(0) = 0, y'(0) = 1
// along the path, to 1e-9 in s.
std::optional<double> conjugate_point(const SurfaceModel& S, const GeodesicPath& path);

// Angle between tangent vectors (dt, dtheta) at radius t under
// g = diag(1, f(t)^2). Throws ZeroVector.
double angle_between(const SurfaceModel& S, double t, double v1_t, double v1_theta, double v2_t, double v2_theta);

// Unsigned angle to the outward meridian of the unit tangent (u, w) at t.
double heading(const SurfaceModel& S, double t, double u, double w);

// Low-level tracer shared by shoot, the distance polish and cut distances.
// State: t, theta, u, w, y, y' (the last two a Jacobi field along the path).
namespace trace {

using State = ode::State<6>;

State initial(const SurfaceModel& S, double t0, double theta0, double phi0);

struct Event {
  std::function<double(const State&)> g;
  int direction = 0;  // +1 rising through 0, -1 falling, 0 either
};

struct Result {
  State x{};
  double s = 0.0;
  int fired = -1;            // index of the event that stopped the trace
  bool left_domain = false;  // t reached t_limit
  bool pole = false;         // step size collapsed near t = 0
  std::vector<GeodesicState> samples;
};

struct Options {
  ode::Tolerance tol{1e-12, 1e-14};
  double t_limit = std::numeric_limits<double>::infinity();  // defaults to S.t_max()
  bool record = false;
  // Keep steps short against the Jacobi oscillation so sign changes of y are
  // never skipped.
  bool resolve_jacobi = false;
};

// Integrates from x0 for at most `length`, stopping at the first event
// (located by Illinois iteration on the step length) or when t reaches the
// limit.
Result run(const SurfaceModel& S, const State& x0, double length, std::span<const Event> events,
           const Options& options);

}  // namespace trace

}  // namespace revlab
