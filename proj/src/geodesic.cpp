#include "revlab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revlab/errors.hpp"

namespace revlab {

namespace trace {

namespace {

struct Rhs {
  const SurfaceModel* S;

  void operator()(const State& x, State& dx, double) const {
    const WarpValue v = S->at(x[0]);
    const double u = x[2], w = x[3];
    dx[0] = u;
    dx[1] = w;
    dx[2] = v.f * v.fp * w * w;
    // Meridians (w == 0) may pass through the pole where f vanishes.
    dx[3] = w == 0.0 ? 0.0 : -2.0 * (v.fp / v.f) * u * w;
    dx[4] = x[5];
    dx[5] = -S->G(x[0]) * x[4];
  }
};

bool triggered(int direction, double g0, double g1) {
  if (direction >= 0 && g0 < 0.0 && g1 >= 0.0) return true;
  if (direction <= 0 && g0 > 0.0 && g1 <= 0.0) return true;
  return false;
}

GeodesicState sample(double s, const State& x) { return {s, x[0], x[1], x[2], x[3]}; }

}  // namespace

State initial(const SurfaceModel& S, double t0, double theta0, double phi0) {
  if (t0 == 0.0) return {0.0, theta0, 1.0, 0.0, 0.0, 1.0};
  const double f = S.f(t0);
  const double sp = std::abs(phi0) == std::numbers::pi ? 0.0 : std::sin(phi0);
  return {t0, theta0, std::cos(phi0), sp / f, 0.0, 1.0};
}

namespace {

// Geodesics have unit speed, so |dt| <= ds: a step no longer than the gap to
// the nearest narrow feature cannot jump over it.
double feature_cap(const std::vector<Feature>& F, double t) {
  if (F.empty()) return std::numeric_limits<double>::infinity();
  const auto it = std::upper_bound(F.begin(), F.end(), t, [](double v, const Feature& f) { return v < f.begin; });
  double cap = std::numeric_limits<double>::infinity();
  if (it != F.end()) cap = std::max(it->begin - t, it->max_step);
  if (it != F.begin()) {
    const Feature& f = *(it - 1);
    if (t < f.end) return f.max_step;
    cap = std::min(cap, std::max(t - f.end, f.max_step));
  }
  return cap;
}

}  // namespace

Result run(const SurfaceModel& S, const State& x0, double length, std::span<const Event> events,
           const Options& options) {
  const double t_limit = std::isfinite(options.t_limit) ? options.t_limit : S.t_max();
  Rhs rhs{&S};
  ode::Rkf78<6> rk(options.tol);
  Result out;
  out.x = x0;
  if (options.record) out.samples.push_back(sample(0.0, x0));

  double s = 0.0;
  double h = std::min({0.01, length, 0.05 * std::max(std::abs(x0[0]), 1e-3)});
  std::vector<double> g_prev(events.size());
  for (std::size_t k = 0; k < events.size(); ++k) g_prev[k] = events[k].g(x0);

  while (s < length) {
    double step = std::min({h, length - s, feature_cap(S.narrow_features(), out.x[0])});
    if (options.resolve_jacobi) {
      const double g = S.G(out.x[0]);
      if (g > 0.0) step = std::min(step, 0.3 / std::sqrt(g));
    }
    const bool to_end = step >= length - s;
    State x = out.x;
    double s_new = s, h_next = step;
    if (!rk.try_step(rhs, x, s_new, h_next, nullptr)) {
      h = h_next;
      if (h < 1e-13 * std::max(1.0, s)) {
        out.pole = true;
        out.s = s;
        return out;
      }
      continue;
    }
    if (to_end) s_new = length;

    // Earliest of: leaving the domain, a user event.
    double best = step + 1.0;
    int which = -2;
    State at{};
    if (x[0] >= t_limit && out.x[0] < t_limit) {
      State r;
      const double dz = ode::locate_event(
          rk, rhs, out.x, s, step, [t_limit](const State& y) { return y[0] - t_limit; }, out.x[0] - t_limit,
          x[0] - t_limit, 1e-13 * std::max(1.0, s), &r);
      best = dz;
      which = -1;
      at = r;
    }
    std::vector<double> g_new(events.size());
    for (std::size_t k = 0; k < events.size(); ++k) {
      g_new[k] = events[k].g(x);
      if (!triggered(events[k].direction, g_prev[k], g_new[k])) continue;
      State r;
      const double dz = ode::locate_event(rk, rhs, out.x, s, step, events[k].g, g_prev[k], g_new[k],
                                          1e-13 * std::max(1.0, s), &r);
      if (dz < best) {
        best = dz;
        which = static_cast<int>(k);
        at = r;
      }
    }
    if (which != -2) {
      out.x = at;
      out.s = s + best;
      out.fired = which >= 0 ? which : -1;
      out.left_domain = which == -1;
      if (options.record) out.samples.push_back(sample(out.s, out.x));
      return out;
    }

    if (x[0] <= 0.0 && x[3] != 0.0) {
      out.pole = true;
      out.s = s;
      return out;
    }
    out.x = x;
    s = s_new;
    g_prev = std::move(g_new);
    if (options.record) out.samples.push_back(sample(s, x));
    h = to_end ? std::max(h, h_next) : h_next;
  }
  out.s = s;
  return out;
}

}  // namespace trace

namespace {

void measure_drift(const SurfaceModel& S, GeodesicPath& p) {
  for (const GeodesicState& g : p.states) {
    const double f = S.f(g.t);
    p.clairaut_drift = std::max(p.clairaut_drift, std::abs(f * f * g.w - p.nu));
    p.speed_drift = std::max(p.speed_drift, std::abs(g.u * g.u + f * f * g.w * g.w - 1.0));
  }
}

// Radial geodesic t(s) = t0 + sign * s, reflected through the pole.
GeodesicPath radial(const SurfaceModel& S, double t0, double theta0, bool inward, double length,
                    const ShootOptions& options) {
  GeodesicPath p;
  p.t0 = t0;
  p.theta0 = theta0;
  p.phi0 = inward ? std::numbers::pi : 0.0;
  const double T = S.t_max();
  auto state_at = [&](double s) -> GeodesicState {
    if (!inward) return {s, t0 + s, theta0, 1.0, 0.0};
    if (s <= t0) return {s, t0 - s, theta0, -1.0, 0.0};
    return {s, s - t0, theta0 + std::numbers::pi, 1.0, 0.0};
  };
  double L = length;
  const double exit = inward ? t0 + T : T - t0;
  if (L > exit) {
    if (options.strict) throw LeftDomain(exit);
    L = exit;
    p.truncated = true;
  }
  const int n = 64;
  for (int k = 0; k <= n; ++k) {
    const double s = L * k / n;
    if (inward && k > 0 && s > t0 && L * (k - 1) / n < t0) {
      p.states.push_back({t0, 0.0, theta0, -1.0, 0.0});
    }
    p.states.push_back(state_at(s));
  }
  p.length = L;
  return p;
}

}  // namespace

GeodesicPath shoot(const SurfaceModel& S, double t0, double theta0, double phi0, double length,
                   const ShootOptions& options) {
  constexpr double pi = std::numbers::pi;
  if (!(t0 > 0.0)) throw BadParameter("shoot requires t0 > 0; only meridians leave the pole");
  if (t0 > S.t_max()) throw BadParameter("shoot start beyond t_max");
  if (!(length > 0.0) || !std::isfinite(length)) throw BadParameter("shoot length must be positive");
  if (!(std::abs(phi0) <= pi)) throw BadParameter("phi0 must lie in [-pi, pi]");
  if (phi0 == 0.0) return radial(S, t0, theta0, false, length, options);
  if (std::abs(phi0) == pi) return radial(S, t0, theta0, true, length, options);

  trace::Options opt;
  opt.tol = options.tol;
  opt.record = options.record;
  const trace::Result r = trace::run(S, trace::initial(S, t0, theta0, phi0), length, {}, opt);
  GeodesicPath p;
  p.t0 = t0;
  p.theta0 = theta0;
  p.phi0 = phi0;
  p.nu = S.f(t0) * std::sin(phi0);
  if (r.pole) throw PoleHit(r.s);
  if (r.left_domain) {
    if (options.strict) throw LeftDomain(r.s);
    p.truncated = true;
  }
  p.length = r.s;
  p.states = r.samples;
  if (p.states.empty()) p.states.push_back({r.s, r.x[0], r.x[1], r.x[2], r.x[3]});
  measure_drift(S, p);
  return p;
}

GeodesicPath meridian(const SurfaceModel& S, double theta, double length) {
  GeodesicPath p;
  p.theta0 = theta;
  const double L = std::min(length, S.t_max());
  p.truncated = L < length;
  const int n = 64;
  for (int k = 0; k <= n; ++k) {
    const double s = L * k / n;
    p.states.push_back({s, s, theta, 1.0, 0.0});
  }
  p.length = L;
  return p;
}

std::optional<double> conjugate_point(const SurfaceModel& S, const GeodesicPath& path) {
  const trace::State x0 = trace::initial(S, path.t0, path.theta0, path.phi0);
  const trace::Event zero{[](const trace::State& x) { return x[4]; }, -1};
  trace::Options opt;
  opt.resolve_jacobi = true;
  // Radial paths through the pole have t < 0 in the tracer; only |t| matters.
  opt.t_limit = S.t_max() * (1.0 + 1e-12);
  const trace::Result r = trace::run(S, x0, path.length, std::span(&zero, 1), opt);
  if (r.fired == 0) return r.s;
  return std::nullopt;
}

double angle_between(const SurfaceModel& S, double t, double v1_t, double v1_theta, double v2_t, double v2_theta) {
  const double f = S.f(t);
  const double f2 = f * f;
  const double n1 = std::sqrt(v1_t * v1_t + f2 * v1_theta * v1_theta);
  const double n2 = std::sqrt(v2_t * v2_t + f2 * v2_theta * v2_theta);
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw ZeroVector();
  const double c = (v1_t * v2_t + f2 * v1_theta * v2_theta) / (n1 * n2);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double heading(const SurfaceModel& S, double t, double u, double w) { return std::atan2(std::abs(S.f(t) * w), u); }

}  // namespace revlab
