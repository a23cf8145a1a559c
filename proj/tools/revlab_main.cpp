// revlab: command-line front end. Every subcommand writes JSON (primary), CSV
// series and SVG charts into --out and exits with
//   0 all checks passed, 1 violations found, 2 gate or precondition failure,
//   3 input error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "revlab/busemann.hpp"
#include "revlab/comparison.hpp"
#include "revlab/cutlocus.hpp"
#include "revlab/distance.hpp"
#include "revlab/errors.hpp"
#include "revlab/geodesic.hpp"
#include "revlab/kernels/fan_step.hpp"
#include "revlab/parallel.hpp"
#include "revlab/report.hpp"
#include "revlab/spec_file.hpp"

namespace fs = std::filesystem;
using revlab::report::json;
using namespace revlab;

namespace {

constexpr double kPi = std::numbers::pi;

enum Exit { kPass = 0, kViolations = 1, kGate = 2, kInputError = 3 };

struct Config {
  std::string command;
  std::vector<std::string> surface_args;
  std::vector<SurfaceSpec> specs;
  fs::path out = "revlab_out";
  std::uint64_t seed = 7;
  std::vector<std::string> tol_args, sample_args;
  std::map<std::string, double> tol{
      {"identity", 1e-6}, {"cohn_vossen", 1e-6}, {"meridian", 1e-6}, {"drift", 1e-8},  {"ray", 1e-6},
      {"busemann", 1e-5}, {"angle", 1e-3},       {"growth", 1e-3},   {"exhaustion", 1e-3}, {"tct", 1e-4},
      {"domination", 1e-12}};
  std::map<std::string, long> samples{{"fan", 1024},        {"n_scan", 720},      {"triangles", 200},  {"growth", 100},
                                      {"angles", 32},       {"radii", 8},         {"r2_fan", 256},     {"r3_radii", 16},
                                      {"r3_angles", 16},    {"points", 50},       {"sector_radii", 8}, {"sector_angles", 16},
                                      {"sector_fan", 256},  {"bracket", 8},       {"fan_chart", 48}};
  double t0 = 2.0, theta0 = 0.0, phi0 = kPi / 3, length = 10.0;
  std::vector<double> from{1.0, 0.0}, to{2.0, 1.0};
  double ray_theta = 0.0;
};

template <class T>
void apply_overrides(const std::vector<std::string>& args, std::map<std::string, T>& target, const char* flag) {
  for (const std::string& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw InputError(std::string(flag) + " " + a + ": expected name=value");
    const std::string name = a.substr(0, eq), value = a.substr(eq + 1);
    if (!target.count(name)) throw InputError(std::string(flag) + " " + name + ": unknown name");
    try {
      std::size_t used = 0;
      T v;
      if constexpr (std::is_same_v<T, long>) v = std::stol(value, &used);
      else v = std::stod(value, &used);
      if (used != value.size() || !(v > 0)) throw std::invalid_argument("bad");
      target[name] = v;
    } catch (const std::exception&) {
      throw InputError(std::string(flag) + " " + name + ": '" + value + "' is not a positive number");
    }
  }
}

SurfaceSpec resolve_surface(const std::string& arg) {
  if (fs::is_regular_file(arg)) return read_spec(arg);
  std::string name = arg;
  if (name.rfind("catalog:", 0) == 0) name = name.substr(8);
  static const std::vector<std::string> names{"plane", "hyperbolic", "constant", "paraboloid", "smoothed_cone", "bump", "spike"};
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw InputError("--surface " + arg + ": no such file or catalog surface");
  return catalog_spec(name);
}

json config_json(const Config& c) {
  json j;
  j["command"] = c.command;
  json s = json::array();
  for (const auto& spec : c.specs) s.push_back(report::to_json(spec));
  j["surfaces"] = s;
  j["seed"] = c.seed;
  json t = json::object(), n = json::object();
  for (const auto& [k, v] : c.tol) t[k] = v;
  for (const auto& [k, v] : c.samples) n[k] = v;
  j["tol"] = t;
  j["samples"] = n;
  j["isa"] = std::string(kernels::isa_name(kernels::active_isa()));
  if (c.command == "geodesic" || c.command == "cutlocus") {
    j["t0"] = c.t0;
    j["theta0"] = c.theta0;
  }
  if (c.command == "geodesic") {
    j["phi0"] = c.phi0;
    j["length"] = c.length;
  }
  if (c.command == "distance") {
    j["from"] = c.from;
    j["to"] = c.to;
  }
  if (c.command == "busemann" || c.command == "verify-exhaustion") j["ray_theta"] = c.ray_theta;
  return j;
}

DistanceOptions distance_options(const Config& c) {
  DistanceOptions d;
  d.n_scan = static_cast<int>(c.samples.at("n_scan"));
  return d;
}

BusemannOptions busemann_options(const Config& c) {
  BusemannOptions b;
  b.distance = distance_options(c);
  return b;
}

SectorPlan sector_plan(const Config& c) {
  SectorPlan p;
  p.radii = static_cast<int>(c.samples.at("sector_radii"));
  p.angles = static_cast<int>(c.samples.at("sector_angles"));
  p.fan = static_cast<int>(c.samples.at("sector_fan"));
  return p;
}

LemmaPlan lemma_plan(const Config& c) {
  LemmaPlan p;
  p.r2_fan = static_cast<int>(c.samples.at("r2_fan"));
  p.r3_radii = static_cast<int>(c.samples.at("r3_radii"));
  p.r3_angles = static_cast<int>(c.samples.at("r3_angles"));
  return p;
}

std::string file_id(const SurfaceModel& S) {
  std::string id = S.id();
  for (char& ch : id)
    if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
  return id;
}

// ---------------------------------------------------------------- surface

int run_surface(const Config& c, const SurfaceModel& S, const fs::path& out) {
  const TotalCurvature tc = S.total_curvature();
  const SignedIntegrals si = S.signed_curvature_integrals();
  const double residual = S.identity_residual();
  json j;
  j["config"] = config_json(c);
  j["surface"] = report::surface_summary(S);
  j["total_curvature"] = report::to_json(tc);
  j["signed_integrals"] = {{"plus", si.plus}, {"minus", si.minus}};
  j["tail_integral"] = {{"r0", S.tail_integral(0.0)}, {"half", tc.tail_at_half}};
  j["von_mangoldt"] = S.is_von_mangoldt();
  if (auto w = S.von_mangoldt_witness()) j["von_mangoldt_witness"] = {w->first, w->second};
  j["min_curvature_on_grid"] = S.min_curvature_on_grid();
  const bool identity_ok = residual < c.tol.at("identity");
  const bool cv_ok = tc.c_limit <= 2.0 * kPi + c.tol.at("cohn_vossen");
  j["checks"] = {{"identity_residual", residual},
                 {"identity_ok", identity_ok},
                 {"cohn_vossen_ok", cv_ok}};
  const std::string id = file_id(S);
  report::write_json(out / ("surface_" + id + ".json"), j);
  std::vector<std::vector<double>> rows;
  const auto t = S.warp().t();
  const auto f = S.warp().f_samples();
  const auto fp = S.warp().fp_samples();
  for (std::size_t i = 0; i < t.size(); ++i) rows.push_back({t[i], f[i], fp[i], S.G(t[i])});
  report::write_csv(out / ("warp_" + id + ".csv"), {"t", "f", "fp", "G"}, rows);
  return identity_ok && cv_ok ? kPass : kViolations;
}

// --------------------------------------------------------------- geodesic

int run_geodesic(const Config& c, const SurfaceModel& S, const fs::path& out) {
  GeodesicPath p = c.t0 == 0.0 ? meridian(S, c.theta0, c.length) : shoot(S, c.t0, c.theta0, c.phi0, c.length);
  const auto conj = c.t0 == 0.0 ? std::nullopt : conjugate_point(S, p);
  const double per_length = std::max(p.clairaut_drift, p.speed_drift) / std::max(p.length, 1.0);
  json j;
  j["config"] = config_json(c);
  j["surface"] = report::surface_summary(S);
  j["path"] = {{"nu", p.nu},
               {"length", p.length},
               {"truncated", p.truncated},
               {"clairaut_drift", p.clairaut_drift},
               {"speed_drift", p.speed_drift},
               {"conjugate_s", conj ? json(*conj) : json(nullptr)},
               {"end", {{"t", p.end().t}, {"theta", p.end().theta}}}};
  const bool ok = per_length < c.tol.at("drift");
  j["checks"] = {{"drift_per_length", per_length}, {"drift_ok", ok}};
  report::write_json(out / "geodesic.json", j);
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<double, double>> curve;
  double r_max = 0.0;
  for (const auto& s : p.states) {
    rows.push_back({s.s, s.t, s.theta, s.u, s.w});
    curve.push_back({s.t, s.theta});
    r_max = std::max(r_max, s.t);
  }
  report::write_csv(out / "geodesic.csv", {"s", "t", "theta", "dtds", "dthetads"}, rows);
  report::PolarChart chart;
  chart.title = "geodesic on " + S.id();
  chart.r_max = r_max;
  chart.curves.push_back(curve);
  chart.points.push_back({p.states.front().t, p.states.front().theta});
  chart.point_label = "start";
  report::write_polar_svg(out / "geodesic.svg", chart);
  return ok ? kPass : kViolations;
}

// --------------------------------------------------------------- distance

int run_distance(const Config& c, const SurfaceModel& S, const fs::path& out) {
  if (c.from.size() != 2 || c.to.size() != 2) throw InputError("--from/--to: expected t,theta");
  const DistanceResult r = distance(S, {c.from[0], c.from[1]}, {c.to[0], c.to[1]}, distance_options(c));
  json j;
  j["config"] = config_json(c);
  j["d"] = r.d;
  json m = json::array();
  for (const Minimizer& x : r.minimizers) m.push_back({{"phi0", x.phi0}, {"nu", x.nu}, {"length", x.length}});
  j["minimizers"] = m;
  report::write_json(out / "distance.json", j);
  return kPass;
}

// --------------------------------------------------------------- cutlocus

int run_cutlocus(const Config& c, const SurfaceModel& S, const fs::path& out) {
  const CutReport rep = cut_locus(S, c.t0, static_cast<int>(c.samples.at("fan")));
  double worst = 0.0;
  for (const CutPoint& p : rep.points) worst = std::max(worst, std::abs(wrap_angle(p.theta - kPi)));
  const bool vm = S.is_von_mangoldt();
  const bool structure_ok = !vm || rep.structure != CutStructure::kOther;
  const SectorSampler sampler(S, sector_plan(c));
  const DeltaEstimate delta = max_admissible_delta(sampler);
  json j;
  j["config"] = config_json(c);
  j["surface"] = report::surface_summary(S);
  j["t0"] = rep.t0;
  j["structure"] = std::string(to_string(rep.structure));
  j["von_mangoldt"] = vm;
  j["directions"] = rep.records.size() + rep.beyond_horizon.size();
  j["beyond_horizon"] = rep.beyond_horizon.size();
  j["cut_points"] = rep.points.size();
  j["max_offset_from_opposite_meridian"] = rep.points.empty() ? json(nullptr) : json(worst);
  j["endpoint"] = {{"t", rep.endpoint_t ? json(*rep.endpoint_t) : json(nullptr)},
                   {"s", rep.endpoint_s ? json(*rep.endpoint_s) : json(nullptr)},
                   {"phi0", rep.endpoint_phi ? json(*rep.endpoint_phi) : json(nullptr)}};
  j["sector"] = {{"delta0", delta.delta0},
                 {"bracket", delta.bracket},
                 {"certificate", "sampling"},
                 {"radii", sampler.radii()}};
  j["checks"] = {{"structure_ok", structure_ok}};
  report::write_json(out / ("cutlocus_" + file_id(S) + ".json"), j);

  std::vector<std::vector<double>> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const CutDistance& r : rep.records)
    rows.push_back({r.phi0, r.s_conj.value_or(nan), r.s_cross.value_or(nan), r.s_cut.value_or(nan),
                    double(static_cast<int>(r.cause)), r.s_cut ? r.t_cut : nan, r.s_cut ? r.theta_cut : nan});
  for (double phi : rep.beyond_horizon) rows.push_back({phi, nan, nan, nan, -1.0, nan, nan});
  std::sort(rows.begin(), rows.end());
  report::write_csv(out / ("cutlocus_" + file_id(S) + ".csv"),
                    {"phi0", "s_conj", "s_cross", "s_cut", "cause", "t_cut", "theta_cut"}, rows);

  report::PolarChart chart;
  chart.title = "geodesic fan and cut locus of (" + std::to_string(c.t0) + ", 0) on " + S.id();
  chart.r_max = std::min(S.t_max(), 4.0 * c.t0 + 4.0);
  const int lines = static_cast<int>(c.samples.at("fan_chart"));
  for (int k = 0; k < lines; ++k) {
    const double phi = -kPi + 2.0 * kPi * (k + 0.5) / lines;
    try {
      ShootOptions o;
      const double L = 2.0 * chart.r_max;
      const GeodesicPath p = shoot(S, c.t0, 0.0, phi, L, o);
      std::vector<std::pair<double, double>> curve;
      for (const auto& s : p.states) curve.push_back({s.t, s.theta});
      chart.curves.push_back(curve);
    } catch (const Error&) {
    }
  }
  for (const CutPoint& p : rep.points) chart.points.push_back({p.t, p.theta});
  chart.point_label = "cut points";
  report::write_polar_svg(out / ("cutlocus_" + file_id(S) + ".svg"), chart);
  return structure_ok ? kPass : kViolations;
}

// ----------------------------------------------------------------- lemmas

json lemma_diagnostics(const LemmaConstants& L) {
  return {{"c", L.c},
          {"bound", L.bound},
          {"tail_at_r1", L.tail_at_r1},
          {"r2_rays", L.r2_rays},
          {"r2_unclassified", L.r2_unclassified},
          {"r2_min_ray_t", L.r2_min_ray_t},
          {"r2_radii_tried", L.r2_radii_tried},
          {"r3_found", L.r3_found},
          {"r3_min_margin", L.r3_min_margin},
          {"r3_q", {{"t", L.r2}, {"theta", 0.0}}}};
}

int run_lemmas(const Config& c, const SurfaceModel& S, const fs::path& out) {
  const LemmaConstants L = lemma_constants(S, lemma_plan(c));
  const double need = kPi / 2 + L.lambda0 - c.tol.at("angle");
  json series = json::array(), violations = json::array();
  std::vector<std::vector<double>> rows;
  for (const AngleSample& a : L.r3_samples) {
    series.push_back({{"x_t", a.x_t}, {"x_theta", a.x_theta}, {"angle", a.angle}});
    rows.push_back({a.x_t, a.x_theta, a.angle});
    if (L.r3_found && a.x_t >= L.r3 && a.angle < need)
      violations.push_back({{"x_t", a.x_t}, {"x_theta", a.x_theta}, {"angle", a.angle}});
  }
  json j;
  j["surface"] = report::surface_summary(S);
  j["constants"] = report::to_json(L);
  j["diagnostics"] = lemma_diagnostics(L);
  j["series"] = series;
  j["violations"] = violations;
  j["config"] = config_json(c);
  report::write_json(out / "lemmas.json", j);
  report::write_csv(out / "lemma_angles.csv", {"x_t", "x_theta", "angle"}, rows);
  return violations.empty() && L.r3_found ? kPass : kViolations;
}

// --------------------------------------------------------------- busemann

int run_busemann(const Config& c, const SurfaceModel& S, const fs::path& out) {
  const Ray ray{0.0, c.ray_theta, 0.0};
  const int n = static_cast<int>(c.samples.at("points"));
  const double r_hi = std::min(20.0, 0.05 * S.t_max());
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> xs(n);
  for (Point& x : xs) {
    x.t = r_hi * (1.0 - unit(rng));
    x.theta = wrap_angle(-kPi + 2.0 * kPi * unit(rng));
  }
  BusemannOptions bo = busemann_options(c);
  std::vector<BusemannEstimate> est(n);
  parallel_for(n, [&](std::size_t i) {
    BusemannOptions o = bo;
    o.eps = c.tol.at("busemann") * (1.0 + distance(S, xs[i], {0.0, 0.0}, bo.distance).d);
    est[i] = busemann(S, ray, xs[i], o);
  });
  // 1-Lipschitz on consecutive pairs.
  std::vector<double> lip(n > 1 ? n - 1 : 0);
  parallel_for(lip.size(), [&](std::size_t i) { lip[i] = distance(S, xs[i], xs[i + 1], bo.distance).d; });

  json points = json::array(), violations = json::array();
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n; ++i) {
    const BusemannEstimate& e = est[i];
    json row = report::to_json(e);
    row["t"] = xs[i].t;
    row["theta"] = xs[i].theta;
    points.push_back(row);
    rows.push_back({xs[i].t, xs[i].theta, e.value, e.lower, e.upper, e.horizon, double(e.exhausted)});
    if (!(e.lower <= e.value + 1e-12 && e.value <= e.upper + 1e-12))
      violations.push_back({{"kind", "bracket"}, {"index", i}});
  }
  for (std::size_t i = 0; i < lip.size(); ++i) {
    const double eps = c.tol.at("busemann") * (2.0 + est[i].upper + est[i + 1].upper);
    if (std::abs(est[i].value - est[i + 1].value) > lip[i] + 2.0 * eps)
      violations.push_back({{"kind", "lipschitz"}, {"index", i}, {"distance", lip[i]}});
  }

  // Circle minima m(R) of the same function.
  ExhaustionPlan ep;
  const int nr = static_cast<int>(c.samples.at("radii"));
  for (int i = 0; i < nr; ++i) ep.radii.push_back(nr == 1 ? r_hi : 0.5 * std::pow(2.0 * r_hi, double(i) / (nr - 1)));
  ep.angles = static_cast<int>(c.samples.at("angles"));
  ep.busemann = bo;
  const ExhaustionReport ex = exhaustion_check(S, {ray}, ep);
  json series = json::array();
  std::vector<std::vector<double>> mrows;
  for (const ExhaustionPoint& p : ex.series) {
    series.push_back({{"R", p.R}, {"m", p.m}, {"theta_min", p.theta_min}});
    mrows.push_back({p.R, p.m, p.theta_min});
  }

  json constants = nullptr;
  try {
    constants = report::to_json(lemma_constants(S, lemma_plan(c)));
  } catch (const TotalCurvatureNotAbovePi&) {
  }
  json j;
  j["surface"] = report::surface_summary(S);
  j["constants"] = constants;
  j["ray"] = {{"kind", "meridian"}, {"theta", c.ray_theta}};
  j["series"] = series;
  j["violations"] = violations;
  j["points"] = points;
  j["config"] = config_json(c);
  report::write_json(out / "busemann.json", j);
  report::write_csv(out / "busemann.csv", {"R", "m", "theta_min"}, mrows);
  report::write_csv(out / "busemann_points.csv", {"t", "theta", "F", "lower", "upper", "horizon", "exhausted"}, rows);
  return violations.empty() ? kPass : kViolations;
}

// -------------------------------------------------------------------- tct

int run_tct(const Config& c, const SurfaceModel& M, const SurfaceModel& model, const fs::path& out,
            const std::string& stem = "tct") {
  const DominationCertificate dom = radial_domination(M, model, c.tol.at("domination"));
  if (!dom.certified)
    throw GateFailed("'" + M.id() + "' does not radially dominate '" + model.id() + "' (margin " +
                     std::to_string(dom.margin) + ")");
  const DeltaEstimate delta = max_admissible_delta(model, sector_plan(c));
  if (!(delta.delta0 > 0.1)) throw GateFailed("model sector too narrow for sampling: " + std::to_string(delta.delta0));
  TctOptions o;
  o.n = static_cast<int>(c.samples.at("triangles"));
  o.seed = c.seed;
  o.tol = c.tol.at("tct");
  o.domination_tol = c.tol.at("domination");
  o.comparison.bracket_samples = static_cast<int>(c.samples.at("bracket"));
  o.comparison.distance = distance_options(c);
  const TctReport rep = verify_tct(M, model, delta.delta0, o);
  json j;
  j["pairs"] = json::array({json::array({M.id(), model.id()})});
  j["n"] = rep.n;
  j["violations"] = rep.violations;
  j["margins"] = report::to_json(rep.margins);
  j["anomalies"] = rep.anomalies;
  j["delta0"] = delta.delta0;
  j["domination"] = report::to_json(rep.domination);
  j["config"] = config_json(c);
  report::write_json(out / (stem + ".json"), j);
  std::vector<std::vector<double>> rows;
  for (const TctSample& s : rep.samples)
    rows.push_back({s.a, s.b, s.delta, s.in_m.c, s.in_m.angle_p, s.in_m.angle_x, s.in_m.angle_y,
                    s.in_model.angle_p, s.in_model.angle_x, s.in_model.angle_y, s.margin, double(s.solved)});
  report::write_csv(out / (stem + ".csv"),
                    {"a", "b", "delta", "c", "angle_p", "angle_x", "angle_y", "model_angle_p", "model_angle_x",
                     "model_angle_y", "margin", "solved"},
                    rows);
  return rep.violations == 0 ? kPass : kViolations;
}

// ------------------------------------------------------------- exhaustion

int run_exhaustion(const Config& c, const SurfaceModel& S, const fs::path& out) {
  const LemmaConstants L = lemma_constants(S, lemma_plan(c));
  const Ray ray{0.0, c.ray_theta, 0.0};
  const DeltaEstimate delta = max_admissible_delta(S, sector_plan(c));
  GrowthPlan gp;
  gp.samples = static_cast<int>(c.samples.at("growth"));
  gp.tol = c.tol.at("growth");
  gp.delta0 = delta.delta0;
  gp.seed = c.seed;
  gp.busemann = busemann_options(c);
  const GrowthReport g = growth_check(S, ray, L, gp);

  ExhaustionPlan ep;
  const int nr = static_cast<int>(c.samples.at("radii"));
  const double r_hi = std::min(16.0 * L.r2, 0.1 * S.t_max());
  for (int i = 0; i < nr; ++i) ep.radii.push_back(nr == 1 ? L.r2 : L.r2 * std::pow(r_hi / L.r2, double(i) / (nr - 1)));
  ep.angles = static_cast<int>(c.samples.at("angles"));
  ep.slope_min = std::sin(L.lambda0);
  ep.tol = c.tol.at("exhaustion");
  ep.delta0 = delta.delta0;
  ep.busemann = busemann_options(c);
  const ExhaustionReport e = exhaustion_check(S, {ray}, ep);

  json series = json::array(), violations = json::array();
  std::vector<std::vector<double>> rows;
  for (const ExhaustionPoint& p : e.series) {
    series.push_back({{"R", p.R}, {"m", p.m}, {"theta_min", p.theta_min}});
    rows.push_back({p.R, p.m, p.theta_min});
  }
  for (const ExhaustionViolation& v : e.violations)
    violations.push_back({{"kind", "slope"}, {"R1", v.R1}, {"R2", v.R2}, {"slope", v.slope}});
  std::vector<std::vector<double>> grows;
  for (const GrowthSample& s : g.samples) {
    grows.push_back({s.q_t, s.q_theta, s.F_q, s.F_a, s.rhs, s.margin,
                     s.asymptotic_angle.value_or(std::numeric_limits<double>::quiet_NaN())});
    if (s.margin < -gp.tol)
      violations.push_back({{"kind", "growth"}, {"q_t", s.q_t}, {"q_theta", s.q_theta}, {"margin", s.margin}});
  }
  json j;
  j["surface"] = report::surface_summary(S);
  j["constants"] = report::to_json(L);
  j["series"] = series;
  j["violations"] = violations;
  j["min_slope"] = e.min_slope;
  j["slope_required"] = ep.slope_min;
  j["non_growing_directions"] = e.non_growing;
  j["growth"] = {{"samples", g.samples.size()},
                 {"filtered", g.filtered},
                 {"violations", g.violations},
                 {"min_margin", g.min_margin},
                 {"angle_violations", g.angle_violations},
                 {"min_angle_margin", g.min_angle_margin}};
  j["delta0"] = delta.delta0;
  j["config"] = config_json(c);
  report::write_json(out / "exhaustion.json", j);
  report::write_csv(out / "exhaustion.csv", {"R", "m", "theta_min"}, rows);
  report::write_csv(out / "growth.csv", {"q_t", "q_theta", "F_q", "F_a", "rhs", "margin", "asymptotic_angle"}, grows);
  report::LineChart chart;
  chart.title = "circle minima of the Busemann function on " + S.id();
  chart.x_label = "R";
  chart.y_label = "m(R)";
  report::LineSeries m{"m(R)", {}}, bound{"m(r2) + (R - r2) sin(lambda0)", {}};
  for (const ExhaustionPoint& p : e.series) {
    m.xy.push_back({p.R, p.m});
    bound.xy.push_back({p.R, e.series.front().m + (p.R - L.r2) * ep.slope_min});
  }
  chart.series = {m, bound};
  report::write_line_svg(out / "exhaustion.svg", chart);
  return violations.empty() ? kPass : kViolations;
}

// ------------------------------------------------------------- report-all

int code_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kInput:
    case ErrorKind::kBadParameter:
    case ErrorKind::kWarpVanishes:
    case ErrorKind::kNonFiniteCurvature:
      return kInputError;
    default:
      return kGate;
  }
}

int run_report_all(Config c, const std::vector<SurfaceModel>& surfaces, const fs::path& out) {
  json index;
  index["config"] = config_json(c);
  json entries = json::array();
  int worst = kPass;
  auto record = [&](const std::string& what, const std::string& id, auto&& fn) {
    json e{{"step", what}, {"surface", id}};
    try {
      const int code = fn();
      e["exit"] = code;
      worst = std::max(worst, code);
    } catch (const Error& err) {
      // A gate that does not apply to a surface is an outcome, not a failure.
      e["exit"] = code_of(err);
      e["error"] = err.what();
      if (code_of(err) == kInputError) worst = std::max(worst, int(kInputError));
    }
    entries.push_back(e);
  };
  for (const SurfaceModel& S : surfaces) {
    record("surface", S.id(), [&] { return run_surface(c, S, out / "surface"); });
    Config cc = c;
    cc.command = "cutlocus";
    cc.t0 = std::min(c.t0, 0.5 * S.t_max());
    record("cutlocus", S.id(), [&] { return run_cutlocus(cc, S, out / "cutlocus"); });
    Config bc = c;
    bc.command = "busemann";
    record("busemann", S.id(), [&] { return run_busemann(bc, S, out / "busemann" / file_id(S)); });
    if (S.total_curvature().c_limit - S.total_curvature().bound > kPi) {
      Config lc = c;
      lc.command = "lemmas";
      record("lemmas", S.id(), [&] { return run_lemmas(lc, S, out / "lemmas" / file_id(S)); });
      lc.command = "verify-exhaustion";
      record("verify-exhaustion", S.id(), [&] { return run_exhaustion(lc, S, out / "exhaustion" / file_id(S)); });
    }
  }
  for (const SurfaceModel& M : surfaces)
    for (const SurfaceModel& model : surfaces) {
      if (!radial_domination(M, model, c.tol.at("domination")).certified) continue;
      Config tc = c;
      tc.command = "verify-tct";
      record("verify-tct", M.id() + "|" + model.id(),
             [&] { return run_tct(tc, M, model, out / "tct", "tct_" + file_id(M) + "__" + file_id(model)); });
    }
  index["steps"] = entries;
  index["exit"] = worst;
  report::write_json(out / "index.json", index);
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"revlab: geodesics, cut loci, total curvature and Busemann functions on surfaces of revolution"};
  app.require_subcommand(1);
  auto common = [&c](CLI::App* s) {
    s->add_option("--surface", c.surface_args, "surface spec file or catalog name (repeatable)");
    s->add_option("--out", c.out, "output directory");
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--tol", c.tol_args, "tolerance override name=value (repeatable)");
    s->add_option("--samples", c.sample_args, "sample-count override name=int (repeatable)");
  };
  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"surface", "geodesic", "distance", "cutlocus", "lemmas", "busemann", "verify-tct",
                           "verify-exhaustion", "report-all"}) {
    subs[name] = app.add_subcommand(name);
    common(subs[name]);
  }
  subs["surface"]->description("warp function, total curvature and classification");
  subs["geodesic"]->description("integrate one geodesic");
  subs["geodesic"]->add_option("--t0", c.t0);
  subs["geodesic"]->add_option("--theta0", c.theta0);
  subs["geodesic"]->add_option("--phi0", c.phi0);
  subs["geodesic"]->add_option("--length", c.length);
  subs["distance"]->description("distance and minimal geodesics between two points");
  subs["distance"]->add_option("--from", c.from, "t theta")->expected(2)->delimiter(',');
  subs["distance"]->add_option("--to", c.to, "t theta")->expected(2)->delimiter(',');
  subs["cutlocus"]->description("cut locus of (t0, 0) and the admissible sector");
  subs["cutlocus"]->add_option("--t0", c.t0);
  subs["lemmas"]->description("constants lambda0, r1, r2, r3");
  subs["busemann"]->description("Busemann function of a meridian at sampled points");
  subs["busemann"]->add_option("--ray-theta", c.ray_theta);
  subs["verify-tct"]->description("comparison theorem fuzz on (M, model) given as two --surface");
  subs["verify-exhaustion"]->description("growth inequality and circle minima of the Busemann function");
  subs["verify-exhaustion"]->add_option("--ray-theta", c.ray_theta);
  subs["report-all"]->description("every report for the given surfaces (default: the catalog)");
  subs["report-all"]->add_option("--t0", c.t0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }
  for (const auto& [name, s] : subs)
    if (s->parsed()) c.command = name;

  try {
    apply_overrides(c.tol_args, c.tol, "--tol");
    apply_overrides(c.sample_args, c.samples, "--samples");
    if (c.surface_args.empty()) {
      if (c.command == "report-all")
        c.surface_args = {"plane", "hyperbolic", "paraboloid", "smoothed_cone", "bump", "spike"};
      else if (c.command == "verify-tct")
        c.surface_args = {"plane", "hyperbolic"};
      else
        throw InputError("--surface is required");
    }
    for (const std::string& a : c.surface_args) c.specs.push_back(resolve_surface(a));
    std::vector<SurfaceModel> surfaces;
    for (const SurfaceSpec& s : c.specs) surfaces.push_back(build_surface(s));
    fs::create_directories(c.out);

    const SurfaceModel& S = surfaces.front();
    int code = kPass;
    if (c.command == "surface") {
      for (const SurfaceModel& s : surfaces) code = std::max(code, run_surface(c, s, c.out));
    } else if (c.command == "geodesic") {
      code = run_geodesic(c, S, c.out);
    } else if (c.command == "distance") {
      code = run_distance(c, S, c.out);
    } else if (c.command == "cutlocus") {
      code = run_cutlocus(c, S, c.out);
    } else if (c.command == "lemmas") {
      code = run_lemmas(c, S, c.out);
    } else if (c.command == "busemann") {
      code = run_busemann(c, S, c.out);
    } else if (c.command == "verify-tct") {
      if (surfaces.size() != 2) throw InputError("--surface: verify-tct takes exactly two surfaces (M, model)");
      code = run_tct(c, surfaces[0], surfaces[1], c.out);
    } else if (c.command == "verify-exhaustion") {
      code = run_exhaustion(c, S, c.out);
    } else {
      code = run_report_all(c, surfaces, c.out);
    }
    std::cout << c.command << ": " << (code == kPass ? "pass" : "violations found") << " (" << c.out.string() << ")\n";
    return code;
  } catch (const Error& e) {
    std::cerr << "revlab " << c.command << ": " << e.what() << '\n';
    return code_of(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "revlab " << c.command << ": " << e.what() << '\n';
    return kInputError;
  }
}
