// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "revlab/busemann.hpp"
#include "revlab/comparison.hpp"
#include "revlab/cutlocus.hpp"
#include "revlab/distance.hpp"
#include "revlab/errors.hpp"
#include "revlab/geodesic.hpp"
#include "revlab/parallel.hpp"
#include "revlab/surface.hpp"

#ifndef REVLAB_CLI_PATH
#define REVLAB_CLI_PATH "revlab"
#endif

namespace fs = std::filesystem;
using namespace revlab;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<std::string> kCatalog{"plane", "hyperbolic", "paraboloid", "smoothed_cone", "bump", "spike"};

int failures = 0;

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// Runs one criterion; a library error counts as a failure with its message.
void run(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("error: ") + e.what());
  }
}

void warp_sinh() {
  Clock clock;
  const SurfaceModel S = catalog("hyperbolic", {}, 10.0);
  double worst = 0.0;
  for (int i = 1; i <= 10000; ++i) {
    const double t = 10.0 * i / 10000;
    worst = std::max(worst, std::abs(S.f(t) / std::sinh(t) - 1.0));
  }
  const double sec = clock.seconds();
  report(1, worst < 1e-8 && sec < 1.0, fmt("max relative error %.3g vs sinh on [0, 10], %.3f s", worst, sec));
}

void identity() {
  bool pass = true;
  std::string detail;
  for (const std::string& name : kCatalog) {
    Clock clock;
    const SurfaceModel S = catalog(name);
    const double r = S.identity_residual();
    const double sec = clock.seconds();
    pass = pass && r < 1e-6 && sec < 1.0;
    detail += fmt("%s %.2g (%.2f s) ", name.c_str(), r, sec);
  }
  report(2, pass, "residual per surface: " + detail);
}

void cohn_vossen() {
  bool pass = true;
  std::string detail;
  for (const std::string& name : kCatalog) {
    const double c = catalog(name).total_curvature().c_limit;
    pass = pass && c <= 2.0 * kPi + 1e-6;
    detail += fmt("%s %.6f ", name.c_str(), c);
  }
  report(3, pass, "c: " + detail + fmt("(2 pi = %.6f)", 2.0 * kPi));
}

void paraboloid_total() {
  const SurfaceModel S = catalog("paraboloid", {}, 50.0);
  const TotalCurvature tc = S.total_curvature();
  const double err = std::abs(tc.c_extrapolated - 2.0 * kPi);
  report(4, err < 1e-2,
         fmt("T_max 50: extrapolated c %.8f (|c - 2 pi| %.2e, extrapolation change %.1e); "
             "2 pi (1 - f'(T)) %.6f; tail 2 pi int_{T/2}^T |G| f %.4f",
             tc.c_extrapolated, err, tc.extrapolation_error, tc.c_limit, tc.tail_at_half));
}

void laws_of_cosines() {
  Clock clock;
  const SurfaceModel plane = catalog("plane");
  const SurfaceModel hyp = catalog("hyperbolic");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rad(0.1, 3.0), ang(-kPi, kPi);
  std::vector<std::pair<Point, Point>> pairs(100);
  for (auto& [x, y] : pairs) {
    x = {rad(rng), ang(rng)};
    y = {rad(rng), ang(rng)};
  }
  std::vector<double> ep(pairs.size()), eh(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [x, y] = pairs[i];
    const double cd = std::cos(y.theta - x.theta);
    const double dp = std::sqrt(std::max(0.0, x.t * x.t + y.t * y.t - 2.0 * x.t * y.t * cd));
    const double dh = std::acosh(std::max(1.0, std::cosh(x.t) * std::cosh(y.t) - std::sinh(x.t) * std::sinh(y.t) * cd));
    ep[i] = std::abs(distance(plane, x, y).d - dp) / std::max(dp, 1e-300);
    eh[i] = std::abs(distance(hyp, x, y).d - dh) / std::max(dh, 1e-300);
  });
  const double wp = *std::max_element(ep.begin(), ep.end()), wh = *std::max_element(eh.begin(), eh.end());
  const double sec = clock.seconds();
  report(5, wp < 1e-6 && wh < 1e-6 && sec < 30.0,
         fmt("100 pairs each: plane max rel error %.2e, hyperbolic %.2e, %.1f s", wp, wh, sec));
}

void conservation() {
  bool pass = true;
  std::string detail;
  for (const std::string& name : kCatalog) {
    const SurfaceModel S = catalog(name);
    std::mt19937_64 rng(6);
    const double t_hi = std::min(10.0, 0.5 * S.t_max());
    std::uniform_real_distribution<double> rad(0.05, t_hi), ang(-kPi, kPi), len(1.0, 30.0);
    struct Shot { double t0, theta0, phi0, length; };
    std::vector<Shot> shots(100);
    for (Shot& s : shots) s = {rad(rng), ang(rng), ang(rng), len(rng)};
    std::vector<double> drift(shots.size());
    parallel_for(shots.size(), [&](std::size_t i) {
      ShootOptions o;
      o.record = true;
      const GeodesicPath p = shoot(S, shots[i].t0, shots[i].theta0, shots[i].phi0, shots[i].length, o);
      drift[i] = std::max(p.clairaut_drift, p.speed_drift) / std::max(p.length, 1e-3);
    });
    const double worst = *std::max_element(drift.begin(), drift.end());
    pass = pass && worst < 1e-8;
    detail += fmt("%s %.1e ", name.c_str(), worst);
  }
  report(6, pass, "max drift per unit length over 100 shoots: " + detail);
}

void cut_loci() {
  Clock clock;
  const CutReport par = cut_locus(catalog("paraboloid"), 2.0);
  const CutReport pl = cut_locus(catalog("plane"), 2.0);
  const CutReport hy = cut_locus(catalog("hyperbolic"), 2.0);
  double worst = 0.0;
  for (const CutPoint& p : par.points) worst = std::max(worst, std::abs(wrap_angle(p.theta - kPi)));
  const double sec = clock.seconds();
  const bool pass = !par.points.empty() && worst <= 1e-6 && pl.points.empty() && hy.points.empty() &&
                    pl.beyond_horizon.empty() && hy.beyond_horizon.empty() && sec < 120.0;
  report(7, pass,
         fmt("paraboloid q=(2,0): %zu cut points, max offset from theta=pi %.1e rad, %zu directions past the "
             "horizon, endpoint t %.6f; plane %zu, hyperbolic %zu cut points; %.1f s",
             par.points.size(), worst, par.beyond_horizon.size(), par.endpoint_t.value_or(NAN), pl.points.size(),
             hy.points.size(), sec));
}

struct ConeLemmas {
  SurfaceModel S = catalog("smoothed_cone", {{"a", 0.25}});
  LemmaConstants L;
};

const ConeLemmas& cone() {
  static const ConeLemmas c = [] {
    ConeLemmas c;
    c.L = lemma_constants(c.S);
    return c;
  }();
  return c;
}

void lemmas() {
  Clock clock;
  const ConeLemmas& c = cone();
  const SurfaceModel& S = c.S;
  const LemmaConstants& L = c.L;
  const bool lambda_ok = std::abs(L.lambda0 - kPi / 6) < 1e-9;
  const double tail = S.tail_integral(L.r1);
  const bool r1_ok = tail < L.lambda0;

  // Rays from q = (r2, 0), resampled: every direction that may be a ray stays
  // outside B_{r1}.
  const RayDirectionSet A = ray_directions(S, {L.r2, 0.0}, 192);
  std::vector<double> min_t(A.directions.size(), INFINITY);
  parallel_for(A.directions.size(), [&](std::size_t i) {
    if (A.decided[i] && !A.is_ray[i]) return;
    ShootOptions o;
    const GeodesicPath p = shoot(S, L.r2, 0.0, A.directions[i], 200.0 * L.r2, o);
    for (const auto& s : p.states) min_t[i] = std::min(min_t[i], s.t);
  });
  const double closest = *std::min_element(min_t.begin(), min_t.end());
  const bool r2_ok = closest > L.r1;

  // Fresh points beyond r3.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> xs(64);
  for (Point& x : xs) x = {L.r3 * (1.0 + 3.0 * u(rng)), -kPi + 2.0 * kPi * u(rng)};
  std::vector<double> angle(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { angle[i] = angle_to_pole(S, {L.r2, 0.0}, xs[i]); });
  const double need = kPi / 2 + L.lambda0 - 1e-3;
  const double min_angle = *std::min_element(angle.begin(), angle.end());
  const bool r3_ok = L.r3_found && min_angle >= need && L.r3_min_margin >= -1e-3;
  const double sec = clock.seconds();
  report(8, lambda_ok && r1_ok && r2_ok && r3_ok && sec < 300.0,
         fmt("lambda0 %.10f; r1 %.6f, lambda0 - tail %.2e; r2 %.6f, closest approach of %d sampled rays %.4f; r3 %.4f, min "
             "angle %.4f >= %.4f over 64 fresh x; %.1f s",
             L.lambda0, L.r1, L.lambda0 - tail, L.r2, int(std::count(A.is_ray.begin(), A.is_ray.end(), true)), closest, L.r3,
             min_angle, need, sec));
}

void growth() {
  const ConeLemmas& c = cone();
  GrowthPlan plan;
  plan.samples = 100;
  plan.tol = 1e-3;
  plan.seed = 9;
  const GrowthReport g = growth_check(c.S, Ray{}, c.L, plan);
  report(9, g.violations == 0 && g.samples.size() == 100,
         fmt("%zu q beyond r2: %d violations, min margin %.4f", g.samples.size(), g.violations, g.min_margin));
}

void exhaustion() {
  const ConeLemmas& c = cone();
  ExhaustionPlan plan;
  for (int i = 0; i < 8; ++i) plan.radii.push_back(c.L.r2 * std::pow(2.0, i));
  plan.slope_min = std::sin(c.L.lambda0);
  const ExhaustionReport e = exhaustion_check(c.S, {Ray{}}, plan);
  const ExhaustionReport ctrl = exhaustion_check(catalog("plane"), {Ray{}}, plan);
  report(10, e.violations.empty() && !ctrl.non_growing.empty(),
         fmt("smoothed_cone: %zu radii, %zu pair violations, min slope %.4f >= %.4f; plane control: %zu "
             "non-growing directions, min slope %.4f",
             e.series.size(), e.violations.size(), e.min_slope, plan.slope_min - 1e-3, ctrl.non_growing.size(),
             ctrl.min_slope));
}

void tct() {
  Clock clock;
  const SurfaceModel plane = catalog("plane"), hyp = catalog("hyperbolic");
  const double delta0 = max_admissible_delta(hyp).delta0;
  TctOptions o;
  o.n = 200;
  o.seed = 7;
  const TctReport r = verify_tct(plane, hyp, delta0, o);
  TctOptions oe = o;
  oe.n = 100;
  const TctReport eq = verify_tct(hyp, hyp, delta0, oe);
  double tight = 0.0;
  for (const TctSample& s : eq.samples) tight = std::max(tight, std::abs(s.margin));
  const double sec = clock.seconds();
  report(11, r.violations == 0 && r.anomalies == 0 && eq.anomalies == 0 && tight <= 1e-6 && sec < 300.0,
         fmt("(plane, hyperbolic) n %d: %d violations, margins min %.2e p50 %.2e p95 %.2e; (hyperbolic, "
             "hyperbolic) n %d: max |margin| %.1e; delta0 %.4f; %.1f s",
             r.n, r.violations, r.margins.min, r.margins.p50, r.margins.p95, eq.n, tight, delta0, sec));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void determinism() {
  const fs::path base = fs::temp_directory_path() / "revlab_acceptance_determinism";
  fs::remove_all(base);
  const std::string args =
      " report-all --surface plane --surface hyperbolic --surface smoothed_cone --seed 11"
      " --samples triangles=20 --samples growth=10 --samples radii=4 --samples angles=8 --samples fan=256";
  const int a = std::system(("REVLAB_THREADS=1 " REVLAB_CLI_PATH + args + " --out " + (base / "a").string() + " > /dev/null").c_str());
  const int b = std::system(("REVLAB_THREADS=3 " REVLAB_CLI_PATH + args + " --out " + (base / "b").string() + " > /dev/null").c_str());
  std::size_t files = 0, differ = 0;
  for (const auto& e : fs::recursive_directory_iterator(base / "a")) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension();
    if (ext != ".json" && ext != ".csv") continue;
    ++files;
    const fs::path other = base / "b" / fs::relative(e.path(), base / "a");
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differ;
  }
  report(12, files > 0 && differ == 0 && WIFEXITED(a) && WIFEXITED(b) && WEXITSTATUS(a) == WEXITSTATUS(b),
         fmt("report-all twice (1 and 3 threads, seed 11): %zu JSON/CSV files, %zu differ; exit %d/%d", files,
             differ, WEXITSTATUS(a), WEXITSTATUS(b)));
}

}  // namespace

int main() {
  run(1, warp_sinh);
  run(2, identity);
  run(3, cohn_vossen);
  run(4, paraboloid_total);
  run(5, laws_of_cosines);
  run(6, conservation);
  run(7, cut_loci);
  run(8, lemmas);
  run(9, growth);
  run(10, exhaustion);
  run(11, tct);
  run(12, determinism);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
