#include "revlab/busemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "revlab/cutlocus.hpp"
#include "revlab/errors.hpp"
#include "revlab/geodesic.hpp"
#include "revlab/parallel.hpp"

namespace revlab {

namespace {

constexpr double kPi = std::numbers::pi;

double angular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

// Lowest t reached by the geodesic from (t0, 0) at phi0 (t0 itself unless it
// heads inwards).
double lowest_radius(const SurfaceModel& S, double t0, double phi0) {
  if (phi0 <= kPi / 2) return t0;
  const trace::Event turn{[](const trace::State& x) { return x[2]; }, +1};
  trace::Options opt;
  const trace::Result r = trace::run(S, trace::initial(S, t0, 0.0, phi0), 4.0 * t0 + 10.0, std::span(&turn, 1), opt);
  if (r.fired == 0) return r.x[0];
  if (r.pole) return 0.0;
  return std::min(t0, r.x[0]);
}

}  // namespace

Point point_on(const SurfaceModel& S, const Ray& ray, double s) {
  if (ray.t0 == 0.0) {
    if (s > S.t_max()) throw LeftDomain(s);
    return {s, ray.theta0};
  }
  if (s == 0.0) return {ray.t0, ray.theta0};
  ShootOptions opt;
  opt.strict = true;
  opt.record = false;
  const GeodesicPath p = shoot(S, ray.t0, ray.theta0, ray.phi0, s, opt);
  return {p.end().t, p.end().theta};
}

RayCertificate is_ray(const SurfaceModel& S, const Ray& ray, double horizon, double tol, int samples) {
  if (!(horizon > 0.0)) throw BadParameter("ray horizon must be positive");
  RayCertificate cert;
  cert.ray = ray;
  cert.horizon = horizon;
  cert.samples = samples;
  const Point p0 = point_on(S, ray, 0.0);
  for (int k = samples - 1; k >= 0; --k) {
    const double s = horizon * std::ldexp(1.0, -k);
    const double d = distance(S, p0, point_on(S, ray, s)).d;
    const double res = std::abs(d - s);
    cert.residual = std::max(cert.residual, res);
    if (res > tol && !cert.first_failure) cert.first_failure = s;
  }
  cert.certified = !cert.first_failure;
  return cert;
}

BusemannEstimate busemann(const SurfaceModel& S, const Ray& ray, Point x, const BusemannOptions& options) {
  BusemannEstimate e;
  e.upper = distance(S, x, point_on(S, ray, 0.0), options.distance).d;
  const double eps = options.eps.value_or(1e-5 * (1.0 + e.upper));
  const double T_cap = options.horizon_fraction * S.t_max();

  std::optional<Minimizer> guess;
  auto b_at = [&](double T) {
    const Point y = point_on(S, ray, T);
    const DistanceResult d = guess ? distance_local(S, x, y, *guess, 0.1, options.distance)
                                   : distance(S, x, y, options.distance);
    if (!d.minimizers.empty()) guess = d.minimizers.front();
    return T - d.d;
  };

  double T = std::min(T_cap, std::max(8.0, 4.0 * (x.t + ray.t0 + 1.0)));
  double b = b_at(T);
  e.lower = b;
  e.horizon = T;
  double value = b;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (;;) {
    if (2.0 * T > T_cap) {
      e.exhausted = true;
      break;
    }
    const double b2 = b_at(2.0 * T);
    const double rich = 2.0 * b2 - b;
    T *= 2.0;
    ++e.doublings;
    e.horizon = T;
    e.lower = std::max(e.lower, b2);
    value = rich;
    b = b2;
    if (!std::isnan(prev)) {
      e.increment = std::abs(rich - prev);
      if (e.increment < eps) break;
    }
    prev = rich;
  }
  e.value = std::clamp(value, e.lower, std::max(e.lower, e.upper));
  return e;
}

double angle_to_pole(const SurfaceModel& S, Point q, Point x, const DistanceOptions& options) {
  if (!(q.t > 0.0)) throw BadParameter("angle at the pole is not defined");
  const DistanceResult d = distance(S, q, x, options);
  double worst = 0.0;
  for (const Minimizer& m : d.minimizers) worst = std::max(worst, std::abs(m.phi0));
  return kPi - worst;
}

LemmaConstants lemma_constants(const SurfaceModel& S, const LemmaPlan& plan) {
  LemmaConstants out;
  const TotalCurvature tc = S.total_curvature();
  out.c = tc.c_limit;
  out.bound = tc.bound;
  if (!(tc.c_limit - tc.bound > kPi)) throw TotalCurvatureNotAbovePi(tc.c_limit - tc.bound);
  out.lambda0 = (tc.c_limit - kPi) / 3.0;

  // r1: the tail is non-increasing, so bisect on it.
  double lo = 0.0, hi = S.t_max();
  while (hi - lo > plan.r1_tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (S.tail_integral(mid) < out.lambda0 ? hi : lo) = mid;
  }
  out.r1 = hi;
  out.tail_at_r1 = S.tail_integral(hi);

  // r2: first candidate radius from which no sampled ray dips into B_r1.
  // Undecided directions are treated as possible rays.
  const double r_cap = 0.8 * S.t_max();
  bool found = false;
  double r = std::max(out.r1, 0.05);
  for (int k = 0; k < plan.r2_candidates && !found; ++k) {
    r *= plan.r2_growth;
    if (r > r_cap) break;
    ++out.r2_radii_tried;
    std::vector<int> kind(plan.r2_fan);  // 0 non-ray, 1 ray, 2 undecided
    std::vector<double> low(plan.r2_fan, r);
    parallel_for(plan.r2_fan, [&](std::size_t j) {
      const double phi = kPi * (j + 0.5) / plan.r2_fan;
      try {
        kind[j] = cut_distance(S, r, phi).s_cut ? 0 : 1;
      } catch (const HorizonTooSmall&) {
        kind[j] = 2;
      } catch (const PoleHit&) {
        kind[j] = 2;
      }
      if (kind[j] != 0) low[j] = lowest_radius(S, r, phi);
    });
    int rays = 0, undecided = 0;
    double min_t = r;
    for (int j = 0; j < plan.r2_fan; ++j) {
      if (kind[j] == 0) continue;
      (kind[j] == 1 ? rays : undecided) += 1;
      min_t = std::min(min_t, low[j]);
    }
    if (min_t > out.r1) {
      found = true;
      out.r2 = r;
      out.r2_rays = rays;
      out.r2_unclassified = undecided;
      out.r2_min_ray_t = min_t;
    }
  }
  if (!found) throw HorizonTooSmall(r);

  // r3 for q = (r2, 0): smallest sampled radius beyond which every sampled
  // angle clears pi/2 + lambda0.
  const Point q{out.r2, 0.0};
  const double first = out.r2 * plan.r2_growth;
  const double last = std::min(out.r2 * plan.r3_span, r_cap);
  if (!(last > first)) throw HorizonTooSmall(last);
  const int nr = plan.r3_radii, na = plan.r3_angles;
  out.r3_samples.resize(static_cast<std::size_t>(nr) * na);
  parallel_for(out.r3_samples.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / na, j = static_cast<int>(idx) % na;
    const double rho = nr == 1 ? first : first * std::pow(last / first, double(i) / (nr - 1));
    const Point x{rho, kPi * (j + 0.5) / na};
    out.r3_samples[idx] = {x.t, x.theta, angle_to_pole(S, q, x)};
  });
  const double need = kPi / 2 + out.lambda0;
  std::vector<double> worst(nr, std::numeric_limits<double>::infinity());
  for (std::size_t idx = 0; idx < out.r3_samples.size(); ++idx)
    worst[idx / na] = std::min(worst[idx / na], out.r3_samples[idx].angle);
  int start = nr;
  while (start > 0 && worst[start - 1] >= need) --start;
  if (start < nr) {
    out.r3_found = true;
    out.r3 = out.r3_samples[static_cast<std::size_t>(start) * na].x_t;
    out.r3_min_margin = *std::min_element(worst.begin() + start, worst.end()) - need;
  } else {
    out.r3 = std::numeric_limits<double>::infinity();
    out.r3_min_margin = worst.back() - need;
  }
  return out;
}

RayDirectionSet ray_directions(const SurfaceModel& S, Point p, int resolution) {
  RayDirectionSet A;
  A.p = p;
  A.resolution = 2.0 * kPi / resolution;
  for (int j = 0; j < resolution; ++j) A.directions.push_back(-kPi + 2.0 * kPi * (j + 0.5) / resolution);
  A.is_ray.assign(resolution, true);
  A.decided.assign(resolution, true);
  if (p.t == 0.0) {
    A.diameter = kPi;
    return A;
  }
  std::vector<int> kind(resolution);
  parallel_for(resolution, [&](std::size_t j) {
    const double phi = std::abs(A.directions[j]);
    try {
      kind[j] = cut_distance(S, p.t, phi).s_cut ? 0 : 1;
    } catch (const HorizonTooSmall&) {
      kind[j] = 2;
    } catch (const PoleHit&) {
      kind[j] = 2;
    }
  });
  for (int j = 0; j < resolution; ++j) {
    A.is_ray[j] = kind[j] == 1;
    A.decided[j] = kind[j] != 2;
  }
  for (int a = 0; a < resolution; ++a)
    for (int b = a + 1; b < resolution; ++b)
      if (A.is_ray[a] && A.is_ray[b])
        A.diameter = std::max(A.diameter, angular_distance(A.directions[a], A.directions[b]));
  return A;
}

std::vector<double> uncovered_directions(const RayDirectionSet& A, const std::vector<double>& family, double delta) {
  std::vector<double> out;
  for (std::size_t j = 0; j < A.directions.size(); ++j) {
    if (A.decided[j] && !A.is_ray[j]) continue;
    double best = std::numeric_limits<double>::infinity();
    for (double v : family) best = std::min(best, angular_distance(A.directions[j], v));
    if (best > delta) out.push_back(A.directions[j]);
  }
  return out;
}

double pole_direction(const SurfaceModel& S, const Ray& ray) {
  if (ray.t0 == 0.0) return ray.theta0;
  // Minimal segments from the pole are meridians, so their direction is the
  // angle of the end point.
  double prev = std::numeric_limits<double>::quiet_NaN(), cur = ray.theta0;
  for (double T = 2.0; T + ray.t0 <= S.t_max(); T *= 2.0) {
    cur = wrap_angle(point_on(S, ray, T).theta);
    if (!std::isnan(prev) && angular_distance(cur, prev) < 1e-6) break;
    prev = cur;
  }
  return cur;
}

GrowthReport growth_check(const SurfaceModel& S, const Ray& ray, const LemmaConstants& constants,
                          const GrowthPlan& plan) {
  GrowthReport rep;
  const double r2 = constants.r2;
  const double r_hi = std::min(plan.r_hi_factor * r2, 0.1 * S.t_max());
  if (!(r_hi > r2)) throw HorizonTooSmall(r_hi);
  const double beta = pole_direction(S, ray);
  const double sin_l = std::sin(constants.lambda0);

  std::mt19937_64 rng(plan.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GrowthSample> all(plan.samples);
  for (GrowthSample& g : all) {
    g.q_t = r2 + (r_hi - r2) * (1.0 - unit(rng));
    g.q_theta = wrap_angle(-kPi + 2.0 * kPi * unit(rng));
  }
  std::vector<bool> keep(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) keep[i] = angular_distance(all[i].q_theta, beta) <= plan.delta0;

  const double T_cap = plan.busemann.horizon_fraction * S.t_max();
  parallel_for(all.size(), [&](std::size_t i) {
    if (!keep[i]) return;
    GrowthSample& g = all[i];
    g.F_q = busemann(S, ray, {g.q_t, g.q_theta}, plan.busemann).value;
    g.F_a = busemann(S, ray, {r2, g.q_theta}, plan.busemann).value;
    g.rhs = (g.q_t - r2) * sin_l;
    g.margin = g.F_q - g.F_a - g.rhs;
    if (!plan.asymptotic) return;
    // Direction at q of the limit of minimal segments q -> ray(2^i).
    double prev = std::numeric_limits<double>::quiet_NaN();
    std::optional<Minimizer> guess;
    for (double T = 2.0; T <= T_cap; T *= 2.0) {
      if (T < 2.0 * g.q_t) continue;
      const Point y = point_on(S, ray, T);
      const DistanceResult d = guess ? distance_local(S, {g.q_t, g.q_theta}, y, *guess, 0.1, plan.busemann.distance)
                                     : distance(S, {g.q_t, g.q_theta}, y, plan.busemann.distance);
      guess = d.minimizers.front();
      double a = 0.0;
      for (const Minimizer& m : d.minimizers) a = std::max(a, std::abs(m.phi0));
      g.asymptotic_angle = a;
      if (!std::isnan(prev) && std::abs(a - prev) < 1e-6) {
        g.asymptotic_converged = true;
        break;
      }
      prev = a;
    }
  });

  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.min_angle_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!keep[i]) {
      ++rep.filtered;
      continue;
    }
    const GrowthSample& g = all[i];
    if (g.margin < -plan.tol) ++rep.violations;
    rep.min_margin = std::min(rep.min_margin, g.margin);
    if (g.asymptotic_angle) {
      const double m = kPi / 2 - constants.lambda0 - *g.asymptotic_angle;
      if (m < -plan.tol) ++rep.angle_violations;
      rep.min_angle_margin = std::min(rep.min_angle_margin, m);
    }
    rep.samples.push_back(g);
  }
  return rep;
}

ExhaustionReport exhaustion_check(const SurfaceModel& S, const std::vector<Ray>& rays, const ExhaustionPlan& plan) {
  if (rays.empty() || plan.radii.empty() || plan.angles < 1) throw BadParameter("exhaustion check needs rays, radii and angles");
  std::vector<double> family;
  for (const Ray& r : rays) family.push_back(pole_direction(S, r));
  const RayDirectionSet A = ray_directions(S, {0.0, 0.0}, plan.angles);
  const std::vector<double> unc = uncovered_directions(A, family, plan.delta0);
  if (!unc.empty())
    throw CoveringFailed(std::to_string(unc.size()) + " sampled directions at the pole are not covered, first at theta = " +
                         std::to_string(unc.front()));

  std::vector<double> radii = plan.radii;
  std::sort(radii.begin(), radii.end());
  const std::size_t nr = radii.size(), na = plan.angles, nk = rays.size();
  std::vector<double> F(nr * na * nk);
  parallel_for(F.size(), [&](std::size_t idx) {
    const std::size_t k = idx % nk, j = (idx / nk) % na, i = idx / (nk * na);
    const Point x{radii[i], wrap_angle(-kPi + 2.0 * kPi * double(j) / double(na))};
    F[idx] = busemann(S, rays[k], x, plan.busemann).value;
  });
  auto value = [&](std::size_t i, std::size_t j) {
    double v = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nk; ++k) v = std::max(v, F[(i * na + j) * nk + k]);
    return v;
  };

  ExhaustionReport rep;
  for (std::size_t i = 0; i < nr; ++i) {
    ExhaustionPoint pt{radii[i], std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t j = 0; j < na; ++j) {
      const double v = value(i, j);
      if (v < pt.m) {
        pt.m = v;
        pt.theta_min = wrap_angle(-kPi + 2.0 * kPi * double(j) / double(na));
      }
    }
    rep.series.push_back(pt);
  }
  rep.min_slope = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t b = a + 1; b < nr; ++b) {
      const double dR = rep.series[b].R - rep.series[a].R;
      if (!(dR > 0.0)) continue;
      const double slope = (rep.series[b].m - rep.series[a].m) / dR;
      rep.min_slope = std::min(rep.min_slope, slope);
      if (!(rep.series[b].m > rep.series[a].m) || slope < plan.slope_min - plan.tol)
        rep.violations.push_back({rep.series[a].R, rep.series[b].R, slope});
    }
  if (nr > 1)
    for (std::size_t j = 0; j < na; ++j)
      if (value(nr - 1, j) <= value(0, j) + plan.tol)
        rep.non_growing.push_back(wrap_angle(-kPi + 2.0 * kPi * double(j) / double(na)));
  return rep;
}

}  // namespace revlab
