#include "revlab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "revlab/errors.hpp"
#include "revlab/fan.hpp"

namespace revlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Radius residual at the first arrival on theta = target for launch angle phi
// (reduced frame, theta increasing). +inf when the target is never reached.
struct Probe {
  double r = kInf;
  double s = 0.0;
  trace::State x{};
  bool geodesic = false;  // false for the virtual endpoint phi = pi
};

struct Problem {
  const SurfaceModel* S;
  double t1, t2, target, cap;

  Probe operator()(double phi) const {
    Probe p;
    if (phi >= kPi) {
      // Limit of launches towards the pole: theta jumps by pi at t ~ 0.
      if (target < kPi) p.r = -t2;
      return p;
    }
    if (phi <= 0.0) return p;
    const double tgt = target;
    const trace::Event e{[tgt](const trace::State& x) { return x[1] - tgt; }, +1};
    trace::Options opt;
    const trace::Result res = trace::run(*S, trace::initial(*S, t1, 0.0, phi), cap, std::span(&e, 1), opt);
    if (res.pole) {
      if (target < kPi) p.r = -t2;
      return p;
    }
    if (res.fired != 0) return p;
    p.r = res.x[0] - t2;
    p.s = res.s;
    p.x = res.x;
    p.geodesic = true;
    return p;
  }
};

int sign_of(double r) { return r > 0.0 ? 1 : (r < 0.0 ? -1 : 0); }

// Root of the residual on [a, b] with a sign change; bisection while an end is
// unreached, Illinois once both are finite.
std::optional<Minimizer> polish(const Problem& P, double a, double b, Probe pa, Probe pb) {
  const double tol_r = 1e-13 * (1.0 + P.t2);
  int side = 0;
  double ra = pa.r, rb = pb.r;
  for (int it = 0; it < 200; ++it) {
    if (pa.r == 0.0 && pa.geodesic) { pb = pa; b = a; break; }
    if (pb.r == 0.0 && pb.geodesic) break;
    if (b - a <= 1e-16 * std::max(1.0, b)) break;
    double c;
    if (std::isfinite(ra) && std::isfinite(rb)) {
      c = b - rb * (b - a) / (rb - ra);
      if (!(c > a && c < b)) c = 0.5 * (a + b);
    } else {
      c = 0.5 * (a + b);
    }
    const Probe pc = P(c);
    if (pc.geodesic && std::abs(pc.r) <= tol_r) {
      pa = pb = pc;
      a = b = c;
      break;
    }
    if (sign_of(pc.r) == sign_of(pb.r)) {
      b = c;
      pb = pc;
      rb = pc.r;
      if (side == 1) ra *= 0.5;
      side = 1;
    } else {
      a = c;
      pa = pc;
      ra = pc.r;
      if (side == -1) rb *= 0.5;
      side = -1;
    }
  }
  const Probe& best = (pa.geodesic && (!pb.geodesic || std::abs(pa.r) <= std::abs(pb.r))) ? pa : pb;
  const double phi = (&best == &pa) ? a : b;
  if (!best.geodesic) return std::nullopt;
  // Near-radial arrivals far out cross theta = target at a grazing angle, so
  // integration noise in theta shows up as a large radius residual. The miss
  // is along the meridian; moving the end point back by r changes the length
  // by r u to first order and by O(r^2 sin^2 / s) beyond.
  const double r = best.r;
  const double grazing = std::abs(P.S->f(best.x[0]) * best.x[3]);
  const double tol = 1e-9 * (1.0 + P.t2);
  if (!(std::abs(r) <= tol || (std::abs(r) <= 1e-6 * (1.0 + P.t2) && std::abs(r) * grazing <= tol))) return std::nullopt;
  Minimizer m;
  m.phi0 = phi;
  m.nu = P.S->f(P.t1) * std::sin(phi);
  m.length = best.s - r * best.x[2];
  m.end_u = best.x[2];
  m.end_w = best.x[3];
  m.target = P.target;
  return m;
}

struct Bracket {
  double a, b;
  Probe pa, pb;
  double est;  // coarse length
  double target;
};

struct Reduced {
  double delta;  // in [0, pi]
  bool mirror;
};

Reduced reduce(Point x, Point y) {
  const double raw = wrap_angle(y.theta - x.theta);
  return {std::abs(raw), raw < 0.0};
}

Probe coarse_probe(const ThetaCrossing& h, double t2) {
  Probe p;
  if (h.reached) {
    p.r = h.t - t2;
    p.s = h.s;
    p.geodesic = true;
  }
  return p;
}

// Brackets from a fan over phis (ascending) for every target, plus the
// virtual endpoints at 0 and pi for a full fan.
std::vector<Bracket> find_brackets(const SurfaceModel& S, double t1, double t2, const std::vector<double>& phis,
                                   const std::vector<double>& targets, double cap, bool with_pi_end,
                                   kernels::Isa isa) {
  const FanScan scan(S, t1, phis, targets, cap, isa);
  std::vector<Bracket> out;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    std::vector<double> phi;
    std::vector<Probe> probes;
    if (with_pi_end) {
      // Radial launch: theta never moves.
      phi.push_back(0.0);
      probes.emplace_back();
    }
    phi.insert(phi.end(), phis.begin(), phis.end());
    for (std::size_t i = 0; i < phis.size(); ++i) probes.push_back(coarse_probe(scan.hit(i, k), t2));
    if (with_pi_end) {
      phi.push_back(kPi);
      Probe end;
      if (targets[k] < kPi) end.r = -t2;
      probes.push_back(end);
    }
    for (std::size_t i = 0; i + 1 < phi.size(); ++i) {
      const int sa = sign_of(probes[i].r), sb = sign_of(probes[i + 1].r);
      if (sa == sb && sa != 0) continue;
      if (sa == 0 && i > 0) continue;  // counted with the previous pair
      double est = kInf;
      if (probes[i].geodesic) est = std::min(est, probes[i].s);
      if (probes[i + 1].geodesic) est = std::min(est, probes[i + 1].s);
      if (!std::isfinite(est)) est = t1 + t2;
      out.push_back({phi[i], phi[i + 1], probes[i], probes[i + 1], est, targets[k]});
    }
  }
  std::sort(out.begin(), out.end(), [](const Bracket& p, const Bracket& q) { return p.est < q.est; });
  return out;
}

std::vector<Minimizer> solve_brackets(const SurfaceModel& S, double t1, double t2, double cap,
                                      const std::vector<Bracket>& brackets, double best_known) {
  std::vector<Minimizer> found;
  double best = best_known;
  for (const Bracket& br : brackets) {
    if (br.est > 1.02 * best + 1e-9) continue;
    const Problem P{&S, t1, t2, br.target, cap};
    // Coarse residuals bracket the root; re-evaluate the ends accurately.
    Probe pa = P(br.a), pb = P(br.b);
    double a = br.a, b = br.b;
    if (sign_of(pa.r) == sign_of(pb.r) && sign_of(pa.r) != 0) {
      // The coarse fan misplaced the sign change: look inside, then in the
      // neighbouring cells.
      bool ok = false;
      const double mid = 0.5 * (a + b);
      const Probe pm = P(mid);
      if (sign_of(pm.r) != sign_of(pa.r)) {
        b = mid;
        pb = pm;
        ok = true;
      }
      const double w = br.b - br.a;
      for (int k = 1; k <= 3 && !ok; ++k) {
        const double na = std::max(br.a - k * w, 0.0), nb = std::min(br.b + k * w, kPi);
        const Probe pna = P(na);
        if (sign_of(pna.r) != sign_of(pa.r)) {
          b = a;
          pb = pa;
          a = na;
          pa = pna;
          ok = true;
          break;
        }
        const Probe pnb = P(nb);
        if (sign_of(pnb.r) != sign_of(pb.r)) {
          a = b;
          pa = pb;
          b = nb;
          pb = pnb;
          ok = true;
          break;
        }
        a = na;
        b = nb;
        pa = pna;
        pb = pnb;
      }
      if (!ok) continue;
    }
    if (auto m = polish(P, a, b, pa, pb)) {
      found.push_back(*m);
      best = std::min(best, m->length);
    }
  }
  return found;
}

std::vector<double> target_list(double delta, int windings) {
  std::vector<double> out;
  for (int k = 0; k < windings; ++k) {
    const double base = 2.0 * kPi * k;
    if (base + delta > 0.0) out.push_back(base + delta);
    out.push_back(base + 2.0 * kPi - delta);
  }
  std::sort(out.begin(), out.end());
  // Only exact duplicates (delta = 0 or pi) go: pi - eps and pi + eps reach
  // the point from opposite sides.
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Targets 2 pi k + 2 pi - delta end on the mirror image of y; the geodesic to
// y itself is their reflection and leaves at -phi.
bool reaches_mirror(double target) { return target - 2.0 * kPi * std::floor(target / (2.0 * kPi)) > kPi; }

DistanceResult finish(std::vector<Minimizer> cands, const Reduced& red, const DistanceOptions& options) {
  if (cands.empty()) throw NoConnectionFound("shooting scan found no geodesic to the target point");
  double d = kInf;
  for (const Minimizer& m : cands) d = std::min(d, m.length);
  std::vector<Minimizer> keep;
  for (const Minimizer& m : cands)
    if (m.length <= d * (1.0 + options.equal_rel) + 1e-300) keep.push_back(m);
  // Points on the meridian of x or opposite to it are reached symmetrically.
  const bool symmetric = red.delta == 0.0 || red.delta == kPi;
  std::vector<Minimizer> out;
  for (Minimizer m : keep) {
    if (red.mirror != reaches_mirror(m.target)) {
      m.phi0 = -m.phi0;
      m.end_w = -m.end_w;
      m.nu = -m.nu;
    }
    out.push_back(m);
    if (symmetric && m.phi0 != 0.0 && std::abs(m.phi0) != kPi) {
      Minimizer r = m;
      r.phi0 = -m.phi0;
      r.end_w = -m.end_w;
      r.nu = -m.nu;
      out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end(), [](const Minimizer& p, const Minimizer& q) { return p.phi0 < q.phi0; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Minimizer& p, const Minimizer& q) { return std::abs(p.phi0 - q.phi0) < 1e-9; }),
            out.end());
  return {d, out};
}

void check_point(const SurfaceModel& S, Point p) {
  if (!(p.t >= 0.0) || p.t > S.t_max() || !std::isfinite(p.theta))
    throw BadParameter("point outside the domain [0, t_max]");
}

}  // namespace

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

DistanceResult distance(const SurfaceModel& S, Point x, Point y, const DistanceOptions& options) {
  check_point(S, x);
  check_point(S, y);
  if (x.t == 0.0) return {y.t, {{y.theta, 0.0, y.t, 1.0, 0.0, 0.0}}};
  if (y.t == 0.0) return {x.t, {{kPi, 0.0, x.t, -1.0, 0.0, 0.0}}};
  const Reduced red = reduce(x, y);
  const double t1 = x.t, t2 = y.t;
  if (red.delta == 0.0 && t1 == t2) return {0.0, {{0.0, 0.0, 0.0, 1.0, 0.0, 0.0}}};

  std::vector<Minimizer> cands;
  if (red.delta == 0.0) cands.push_back({t2 > t1 ? 0.0 : kPi, 0.0, std::abs(t1 - t2), t2 > t1 ? 1.0 : -1.0, 0.0, 0.0});
  if (red.delta == kPi) cands.push_back({kPi, 0.0, t1 + t2, 1.0, 0.0, kPi});
  double best = kInf;
  for (const Minimizer& m : cands) best = std::min(best, m.length);

  const double cap = 1.05 * (t1 + t2) + 1e-9;
  const std::vector<double> targets = target_list(red.delta, options.max_windings);
  std::vector<double> phis;
  for (int j = 1; j < options.n_scan; ++j) phis.push_back(kPi * j / options.n_scan);
  const auto brackets = find_brackets(S, t1, t2, phis, targets, cap, true, options.isa);
  for (const Minimizer& m : solve_brackets(S, t1, t2, cap, brackets, best)) cands.push_back(m);
  return finish(std::move(cands), red, options);
}

DistanceResult distance_local(const SurfaceModel& S, Point x, Point y, const Minimizer& guess, double half_width,
                              const DistanceOptions& options) {
  check_point(S, x);
  check_point(S, y);
  const Reduced red = reduce(x, y);
  const bool guess_mirror = (guess.phi0 < 0.0) != reaches_mirror(guess.target);
  const double g = std::abs(guess.phi0);
  if (x.t == 0.0 || y.t == 0.0 || red.delta == 0.0 || red.delta == kPi || guess_mirror != red.mirror ||
      guess.target <= 0.0 || g <= 0.0 || g >= kPi) {
    return distance(S, x, y, options);
  }
  // The travelled angle keeps its winding; recompute it for the new delta.
  const double winding = std::floor(guess.target / (2.0 * kPi));
  const double rem = guess.target - 2.0 * kPi * winding;
  const double target = 2.0 * kPi * winding + (rem <= kPi ? red.delta : 2.0 * kPi - red.delta);

  const double lo = std::max(g - half_width, 1e-9), hi = std::min(g + half_width, kPi - 1e-9);
  std::vector<double> phis;
  const int n = 24;
  for (int j = 0; j <= n; ++j) phis.push_back(lo + (hi - lo) * j / n);
  const double cap = 1.05 * (x.t + y.t) + 1e-9;
  const auto brackets = find_brackets(S, x.t, y.t, phis, {target}, cap, false, options.isa);
  auto found = solve_brackets(S, x.t, y.t, cap, brackets, kInf);
  if (found.empty()) return distance(S, x, y, options);
  return finish(std::move(found), red, options);
}

GeodesicPath minimizer_path(const SurfaceModel& S, Point x, const Minimizer& m) {
  if (x.t == 0.0) return meridian(S, m.phi0, m.length);
  return shoot(S, x.t, x.theta, m.phi0, m.length);
}

namespace {

TriangleData measure(const SurfaceModel& S, double a, double b, double delta, const DistanceResult& r) {
  TriangleData tri;
  tri.a = a;
  tri.b = b;
  tri.c = r.d;
  tri.delta = delta;
  tri.angle_p = delta;
  const Minimizer& m = r.minimizers.front();
  tri.angle_x = kPi - std::abs(m.phi0);
  tri.angle_y = heading(S, b, m.end_u, m.end_w);
  if (std::abs(m.phi0) == kPi && m.length == a + b) {
    tri.angle_x = 0.0;
    tri.angle_y = 0.0;
  }
  return tri;
}

}  // namespace

TriangleData triangle_from_apex(const SurfaceModel& S, double a, double b, double delta,
                                const DistanceOptions& options) {
  if (!(a > 0.0) || !(b > 0.0) || a > S.t_max() || b > S.t_max())
    throw BadParameter("triangle sides must lie in (0, t_max]");
  if (!(delta > 0.0) || delta > kPi) throw BadParameter("apex angle must lie in (0, pi]");
  return measure(S, a, b, delta, distance(S, {a, 0.0}, {b, delta}, options));
}

TriangleData comparison_triangle(const SurfaceModel& S, double a, double b, double c, double delta0,
                                 const ComparisonOptions& options) {
  if (!(a > 0.0) || !(b > 0.0) || !(c >= 0.0)) throw BadParameter("comparison sides must be positive");
  if (c > a + b + 1e-12 * (a + b) || c < std::abs(a - b) - 1e-12 * (a + b))
    throw BadParameter("sides violate the triangle inequality");
  if (!(delta0 > 0.0) || delta0 > kPi) throw BadParameter("delta0 must lie in (0, pi]");
  const double d0 = std::abs(a - b);
  if (c <= d0) {
    TriangleData tri;
    tri.a = a;
    tri.b = b;
    tri.c = d0;
    tri.angle_x = a < b ? kPi : 0.0;
    tri.angle_y = a < b ? 0.0 : kPi;
    return tri;
  }

  const Point x{a, 0.0};
  const int K = options.bracket_samples;
  std::vector<double> deltas{0.0}, ds{d0};
  std::vector<DistanceResult> results(1);
  for (int k = 1; k <= K; ++k) {
    const double dl = delta0 * k / K;
    DistanceResult r = (k == 1 || results.back().minimizers.empty())
                           ? distance(S, x, {b, dl}, options.distance)
                           : distance_local(S, x, {b, dl}, results.back().minimizers.front(), 0.5, options.distance);
    if (!(r.d > ds.back() - 1e-12 * (1.0 + r.d)))
      throw MonotonicityViolation("distance not increasing in the apex angle", dl);
    deltas.push_back(dl);
    ds.push_back(r.d);
    results.push_back(std::move(r));
    if (ds.back() >= c) break;
  }
  if (ds.back() < c - 1e-12 * (1.0 + c)) throw NoSolutionInSector("triangle does not fit in the sector");

  std::size_t k = deltas.size() - 1;
  double lo = deltas[k - 1], hi = deltas[k];
  double flo = ds[k - 1] - c, fhi = ds[k] - c;
  DistanceResult at_hi = results[k];
  Minimizer guess = results[k].minimizers.front();
  if (std::abs(fhi) <= 1e-13 * (1.0 + c)) return measure(S, a, b, hi, at_hi);
  int side = 0;
  DistanceResult cur = at_hi;
  double mid = hi;
  for (int it = 0; it < 100 && hi - lo > options.delta_tol; ++it) {
    mid = hi - fhi * (hi - lo) / (fhi - flo);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    cur = distance_local(S, x, {b, mid}, guess, 0.1, options.distance);
    if (!cur.minimizers.empty()) guess = cur.minimizers.front();
    const double fm = cur.d - c;
    if (std::abs(fm) <= 1e-13 * (1.0 + c)) break;
    if ((fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fm;
      if (side == 1) flo *= 0.5;
      side = 1;
    } else {
      lo = mid;
      flo = fm;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
  }
  return measure(S, a, b, mid, cur);
}

}  // namespace revlab
