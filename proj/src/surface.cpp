#include "revlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revlab/errors.hpp"

namespace revlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kGl5x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                             0.9061798459386640};
constexpr double kGl5w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                             0.2369268850561891};
constexpr double kGl3x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGl3w[3] = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};

constexpr double kTableDt = 0.005;
constexpr std::size_t kTableMax = (std::size_t{1} << 18) + 1;

double part_value(int part, double g) {
  switch (part) {
    case 1: return std::max(g, 0.0);
    case 2: return std::min(g, 0.0);
    case 3: return std::abs(g);
    default: return g;
  }
}

// One Aitken delta-squared pass; entries whose differences vanish are kept.
std::vector<double> aitken_pass(const std::vector<double>& x) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 2 < x.size(); ++i) {
    const double d1 = x[i] - x[i + 1], d2 = x[i + 1] - x[i + 2];
    const double den = d1 - d2;
    out.push_back(std::abs(den) <= 1e-14 * (std::abs(x[i]) + 1e-300) ? x[i] : x[i] - d1 * d1 / den);
  }
  return out;
}

double get(const std::map<std::string, double>& p, const char* key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

SurfaceModel::SurfaceModel(RadialCurvature curvature, double t_max, double tol, std::string id)
    : g_(std::move(curvature)), t_max_(t_max), tol_(tol), id_(std::move(id)) {
  if (id_.empty()) id_ = g_.kind();
  warp_ = WarpFunction::solve(g_, t_max, tol);
  for (const Feature& f : g_.features_up_to(t_max))
    if (f.max_step < 1e299) features_.push_back(f);

  const auto t = warp_.t();
  const std::size_t n = t.size();
  for (auto& c : cum_) c.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = t[i], b = t[i + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum[4] = {0, 0, 0, 0};
    for (int q = 0; q < 5; ++q) {
      const double x = mid + half * kGl5x[q];
      const double gv = g_(x), fv = warp_.f(x);
      for (int p = 0; p < 4; ++p) sum[p] += kGl5w[q] * part_value(p, gv) * fv;
    }
    double low = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double x = mid + half * kGl3x[q];
      low += kGl3w[q] * g_(x) * warp_.f(x);
    }
    quad_error_ += half * std::abs(sum[0] - low);
    for (int p = 0; p < 4; ++p) cum_[p][i + 1] = cum_[p][i] + half * sum[p];
  }

  const std::size_t m = std::min(kTableMax, static_cast<std::size_t>(std::ceil(t_max / kTableDt)) + 1);
  table_.dt = kTableDt;
  table_.inv_dt = 1.0 / kTableDt;
  table_.f.resize(std::max<std::size_t>(m, 2));
  table_.fp.resize(table_.f.size());
  for (std::size_t k = 0; k < table_.f.size(); ++k) {
    const WarpValue v = warp_(std::min(t_max, static_cast<double>(k) * kTableDt));
    table_.f[k] = v.f;
    table_.fp[k] = v.fp;
  }
}

double SurfaceModel::partial(Part part, double T) const {
  const auto& cum = cum_[part];
  if (T <= 0.0) return 0.0;
  T = std::min(T, t_max_);
  const auto t = warp_.t();
  const std::size_t i = warp_.interval(T);
  const double a = t[i];
  if (T <= a) return cum[i];
  const double mid = 0.5 * (a + T), half = 0.5 * (T - a);
  double sum = 0.0;
  for (int q = 0; q < 5; ++q) {
    const double x = mid + half * kGl5x[q];
    sum += kGl5w[q] * part_value(part, g_(x)) * warp_.f(x);
  }
  return cum[i] + half * sum;
}

TotalCurvature SurfaceModel::total_curvature() const {
  TotalCurvature out;
  const double fpT = warp_.fp_samples().back();
  out.c_limit = kTwoPi * (1.0 - fpT);
  out.c_integral = kTwoPi * cum_[kSigned].back();
  out.ivp_error = warp_.diagnostics().ivp_error_estimate;
  out.quadrature_error = quad_error_;
  out.bound = std::abs(out.c_limit - out.c_integral) + kTwoPi * (out.ivp_error + out.quadrature_error);
  out.tail_at_half = tail_integral(0.5 * t_max_);

  // Iterated Aitken on f'(T q^k); slowly converging f' (power laws with log
  // corrections) needs q close to 1.
  std::vector<double> seq;
  for (int k = 0; k < 9; ++k) seq.push_back(warp_(t_max_ * std::pow(0.9, k)).fp);
  double prev = seq.front();
  while (seq.size() >= 3) {
    prev = seq.front();
    seq = aitken_pass(seq);
  }
  out.c_extrapolated = kTwoPi * (1.0 - seq.front());
  out.extrapolation_error = kTwoPi * std::abs(seq.front() - prev);

  auto divergent = [this](Part p) {
    const double full = partial(p, t_max_), half = partial(p, 0.5 * t_max_);
    return std::abs(full - half) > std::max(1e-3, 0.1 * std::abs(full));
  };
  const bool pos = divergent(kPositive), neg = divergent(kNegative);
  out.finite = !pos && !neg;
  out.labeled = !(pos && neg);
  if (!out.finite) {
    // No limit to extrapolate towards.
    out.c_extrapolated = out.c_limit;
    out.extrapolation_error = out.tail_at_half;
  }
  return out;
}

SignedIntegrals SurfaceModel::signed_curvature_integrals() const {
  return {kTwoPi * cum_[kPositive].back(), kTwoPi * cum_[kNegative].back()};
}

double SurfaceModel::tail_integral(double r) const {
  r = std::clamp(r, 0.0, t_max_);
  return std::max(0.0, kTwoPi * (cum_[kAbsolute].back() - partial(kAbsolute, r)));
}

double SurfaceModel::curvature_integral(double T) const { return kTwoPi * partial(kSigned, T); }

double SurfaceModel::identity_residual() const {
  const auto fp = warp_.fp_samples();
  double worst = 0.0;
  for (std::size_t i = 0; i < fp.size(); ++i)
    worst = std::max(worst, std::abs(kTwoPi * (1.0 - fp[i]) - kTwoPi * cum_[kSigned][i]));
  return worst;
}

std::optional<std::pair<double, double>> SurfaceModel::von_mangoldt_witness() const {
  const auto t = warp_.t();
  double running_min = g_(t[0]);
  double at_min = t[0];
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double g = g_(t[i]);
    if (g > running_min + 1e-9 * (1.0 + std::abs(running_min))) return std::make_pair(at_min, t[i]);
    if (g < running_min) {
      running_min = g;
      at_min = t[i];
    }
  }
  return std::nullopt;
}

bool SurfaceModel::is_von_mangoldt() const { return !von_mangoldt_witness().has_value(); }

double SurfaceModel::min_curvature_on_grid() const {
  double lo = g_(0.0);
  for (double t : warp_.t()) lo = std::min(lo, g_(t));
  return lo;
}

double SurfaceModel::flat_radius(double r_min, double eps) const {
  for (double t : warp_.t())
    if (t >= r_min && tail_integral(t) < eps) return t;
  return t_max_;
}

double default_t_max(const std::string& name) {
  if (name == "plane" || name == "smoothed_cone") return 1e5;
  if (name == "hyperbolic") return 8.0;
  if (name == "paraboloid") return 200.0;
  if (name == "bump") return 20.0;
  if (name == "spike") return 45.0;
  throw BadParameter("no default t_max for catalog surface '" + name + "'");
}

SurfaceModel catalog(const std::string& name, const std::map<std::string, double>& params,
                     std::optional<double> t_max, std::optional<double> tol) {
  const double eps = tol.value_or(kDefaultTol);
  auto horizon = [&] { return t_max ? *t_max : default_t_max(name); };
  if (name == "plane") return SurfaceModel(RadialCurvature::plane(), horizon(), eps);
  if (name == "hyperbolic") return SurfaceModel(RadialCurvature::hyperbolic(), horizon(), eps);
  if (name == "paraboloid") return SurfaceModel(RadialCurvature::paraboloid(), horizon(), eps);
  if (name == "constant") {
    if (!t_max) throw BadParameter("constant curvature needs an explicit t_max");
    return SurfaceModel(RadialCurvature::constant(get(params, "k", 0.0)), *t_max, eps);
  }
  if (name == "smoothed_cone")
    return SurfaceModel(RadialCurvature::smoothed_cone(get(params, "a", 0.25)), horizon(), eps);
  if (name == "bump") {
    return SurfaceModel(
        RadialCurvature::bump(get(params, "amplitude", 1.0), get(params, "center", 2.0), get(params, "width", 0.5)),
        horizon(), eps);
  }
  if (name == "spike") {
    SpikeParams p;
    p.a = get(params, "a", p.a);
    p.depth0 = get(params, "depth0", p.depth0);
    p.growth = get(params, "growth", p.growth);
    p.first = get(params, "first", p.first);
    p.spacing = get(params, "spacing", p.spacing);
    p.mass0 = get(params, "mass0", p.mass0);
    return SurfaceModel(RadialCurvature::spike(p), horizon(), eps);
  }
  throw BadParameter("unknown catalog surface '" + name + "'");
}

}  // namespace revlab
