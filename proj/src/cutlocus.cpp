#include "revlab/cutlocus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "revlab/distance.hpp"
#include "revlab/errors.hpp"
#include "revlab/geodesic.hpp"

namespace revlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Flat: no curvature is left past r. Nonpositive: what is left is <= 0 on the
// sampled grid, so the tangent cone at r over-estimates the angle a geodesic
// still sweeps. At the horizon itself nothing is known about what follows, so
// flatness there needs the curvature to have died out well before it.
enum class Beyond { kFlat, kNonpositive, kUnknown };

Beyond classify_beyond(const SurfaceModel& S, double r, double flat_tail) {
  const double probe = r < S.t_max() ? r : 0.5 * S.t_max();
  if (S.tail_integral(probe) < flat_tail) return Beyond::kFlat;
  for (double t : S.warp().t())
    if (t >= r && S.G(t) > 0.0) return Beyond::kUnknown;
  return S.G(S.t_max()) <= 0.0 ? Beyond::kNonpositive : Beyond::kUnknown;
}

}  // namespace

std::string_view to_string(CutCause cause) {
  switch (cause) {
    case CutCause::kConjugate: return "conjugate";
    case CutCause::kCrossing: return "crossing";
    default: return "none";
  }
}

std::string_view to_string(CutStructure structure) {
  switch (structure) {
    case CutStructure::kOppositeMeridianSubray: return "opposite_meridian_subray";
    case CutStructure::kOther: return "other";
    default: return "empty";
  }
}

CutDistance cut_distance(const SurfaceModel& S, double t0, double phi0, const CutOptions& options) {
  if (!(t0 > 0.0) || t0 > S.t_max()) throw BadParameter("cut_distance requires 0 < t0 <= t_max");
  if (!(phi0 > 0.0 && phi0 < kPi)) throw BadParameter("cut_distance requires phi0 in (0, pi)");
  CutDistance out;
  out.phi0 = phi0;

  const double r_exit = std::min(S.t_max(), S.flat_radius(std::max(4.0 * t0, t0 + 10.0), options.flat_tail));
  const trace::Event events[2] = {{[](const trace::State& x) { return x[1] - kPi; }, +1},
                                  {[](const trace::State& x) { return x[4]; }, -1}};
  trace::Options opt;
  opt.resolve_jacobi = true;
  opt.t_limit = r_exit;
  const double cap = 20.0 * (r_exit + t0) + 100.0;
  const trace::Result r = trace::run(S, trace::initial(S, t0, 0.0, phi0), cap, events, opt);
  if (r.pole) throw PoleHit(r.s);

  if (r.fired == 0) {
    out.s_cross = r.s;
    out.s_cut = r.s;
    out.cause = CutCause::kCrossing;
    out.t_cut = r.x[0];
    out.theta_cut = r.x[1];  // located crossing, pi up to the event tolerance
    return out;
  }
  if (r.fired == 1) {
    out.s_conj = r.s;
    out.s_cut = r.s;
    out.cause = CutCause::kConjugate;
    out.t_cut = r.x[0];
    out.theta_cut = r.x[1];
    return out;
  }
  if (!r.left_domain) throw HorizonTooSmall(r.s);

  // Past r_exit: straight lines in the tangent cone of slope k.
  const Beyond beyond = classify_beyond(S, r_exit, options.flat_tail);
  const WarpValue v = S.at(r_exit);
  const double k = v.fp;
  if (beyond == Beyond::kUnknown || !(k > 0.0) || !(r.x[2] > 0.0)) throw HorizonTooSmall(r.s);
  const double nu = S.f(t0) * std::sin(phi0);
  const double sin_a = std::clamp(nu / v.f, -1.0, 1.0);
  const double a = std::asin(sin_a);
  const double psi_target = (kPi - r.x[1]) * k;  // angle left to theta = pi, in the development
  const double y = r.x[4], yp = r.x[5];
  if (y <= 0.0) throw HorizonTooSmall(r.s);
  const bool crosses = psi_target < a;
  if (beyond != Beyond::kFlat) {
    // Only the "neither occurs" answer is safe without flatness.
    if (crosses || yp < 0.0) throw HorizonTooSmall(r.s);
    out.extrapolated = true;
    return out;
  }
  // Flat cone: geodesics are straight lines of the development and Jacobi
  // fields are linear.
  const double rho0 = v.f / k;
  std::optional<double> L_cross, L_conj;
  if (crosses) L_cross = rho0 * std::sin(psi_target) / std::sin(a - psi_target);
  if (yp < 0.0) L_conj = y / -yp;
  out.extrapolated = true;
  if (L_cross) out.s_cross = r.s + *L_cross;
  if (L_conj) out.s_conj = r.s + *L_conj;
  if (!L_cross && !L_conj) return out;
  const bool conj_first = L_conj && (!L_cross || *L_conj < *L_cross);
  const double L = conj_first ? *L_conj : *L_cross;
  const double px = rho0 + L * std::cos(a), py = L * sin_a;
  out.s_cut = r.s + L;
  out.cause = conj_first ? CutCause::kConjugate : CutCause::kCrossing;
  out.t_cut = r_exit + std::hypot(px, py) - rho0;
  out.theta_cut = conj_first ? r.x[1] + std::atan2(py, px) / k : kPi;
  return out;
}

CutReport cut_locus(const SurfaceModel& S, double t0, int resolution, const CutOptions& options) {
  CutReport rep;
  rep.t0 = t0;
  for (int j = 0; j < resolution; ++j) {
    const double phi = kPi * (j + 0.5) / resolution;
    try {
      rep.records.push_back(cut_distance(S, t0, phi, options));
    } catch (const HorizonTooSmall&) {
      rep.beyond_horizon.push_back(phi);
    } catch (const PoleHit&) {
      rep.beyond_horizon.push_back(phi);
    }
  }
  bool off_meridian = false;
  for (const CutDistance& c : rep.records) {
    if (!c.s_cut) continue;
    const double th = wrap_angle(c.theta_cut);
    if (c.cause == CutCause::kCrossing) {
      rep.points.push_back({c.t_cut, th, 2});
    } else {
      rep.points.push_back({c.t_cut, th, 1});
      rep.points.push_back({c.t_cut, -th, 1});
    }
    if (std::abs(wrap_angle(th - kPi)) > 1e-6) off_meridian = true;
  }
  if (rep.points.empty()) return rep;
  rep.structure = off_meridian ? CutStructure::kOther : CutStructure::kOppositeMeridianSubray;
  if (off_meridian) return rep;

  // Endpoint: minimize the cut radius over phi0 around the best fan direction.
  std::size_t best = 0;
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    const auto& c = rep.records[i];
    if (c.s_cut && (!rep.records[best].s_cut || c.t_cut < rep.records[best].t_cut)) best = i;
  }
  const double step = kPi / resolution;
  double lo = std::max(rep.records[best].phi0 - step, 1e-12);
  double hi = std::min(rep.records[best].phi0 + step, kPi - 1e-12);
  auto radius = [&](double phi) {
    try {
      const CutDistance c = cut_distance(S, t0, phi, options);
      return c.s_cut && c.cause == CutCause::kCrossing ? c.t_cut : std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = hi - g * (hi - lo), c2 = lo + g * (hi - lo);
  double f1 = radius(c1), f2 = radius(c2);
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    if (f1 <= f2) {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - g * (hi - lo);
      f1 = radius(c1);
    } else {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + g * (hi - lo);
      f2 = radius(c2);
    }
  }
  double phi = f1 <= f2 ? c1 : c2;
  double t_end = std::min(f1, f2);
  if (rep.records[best].t_cut < t_end) {
    phi = rep.records[best].phi0;
    t_end = rep.records[best].t_cut;
  }
  rep.endpoint_phi = phi;
  rep.endpoint_t = t_end;
  const CutDistance c = cut_distance(S, t0, phi, options);
  rep.endpoint_s = c.s_cut;
  return rep;
}

SectorSampler::SectorSampler(const SurfaceModel& S, const SectorPlan& plan) : plan_(plan) {
  const double r_max = plan.r_max_fraction * S.t_max();
  const double r_min = std::min(plan.r_min, r_max / 8.0);
  for (int k = 0; k < plan.radii; ++k) {
    const double r = plan.radii == 1 ? r_max : r_min * std::pow(r_max / r_min, double(k) / (plan.radii - 1));
    radii_.push_back(r);
    loci_.push_back(cut_locus(S, r, plan.fan));
  }
}

SectorCertificate SectorSampler::admissible(double delta) const {
  SectorCertificate cert;
  for (std::size_t k = 0; k < radii_.size(); ++k) {
    for (int i = 0; i < plan_.angles; ++i) {
      const double tq = delta * (i + 0.5) / plan_.angles;
      ++cert.points_sampled;
      for (const CutPoint& p : loci_[k].points) {
        ++cert.cut_points_checked;
        double th = wrap_angle(p.theta + tq);
        if (th < 0.0) th += 2.0 * kPi;
        if (th > 1e-12 && th < delta - 1e-12) {
          cert.admissible = false;
          if (!cert.witness) cert.witness = SectorWitness{radii_[k], tq, p.t, th};
        }
      }
    }
  }
  return cert;
}

SectorCertificate sector_admissible(const SurfaceModel& S, double delta, const SectorPlan& plan) {
  if (!(delta > 0.0) || delta > kPi) throw BadParameter("sector angle must lie in (0, pi]");
  return SectorSampler(S, plan).admissible(delta);
}

DeltaEstimate max_admissible_delta(const SectorSampler& sampler, int iterations) {
  DeltaEstimate est;
  if (sampler.admissible(kPi).admissible) {
    est.delta0 = kPi;
    return est;
  }
  double lo = 0.0, hi = kPi;
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sampler.admissible(mid).admissible ? lo : hi) = mid;
    ++est.iterations;
  }
  est.delta0 = lo;
  est.bracket = hi - lo;
  return est;
}

DeltaEstimate max_admissible_delta(const SurfaceModel& S, const SectorPlan& plan, int iterations) {
  return max_admissible_delta(SectorSampler(S, plan), iterations);
}

}  // namespace revlab
