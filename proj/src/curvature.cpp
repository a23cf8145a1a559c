#include "revlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "revlab/errors.hpp"

namespace revlab {

namespace catalog_forms {

double paraboloid_radius(double t) {
  if (t <= 0.0) return 0.0;
  double r = t < 1.0 ? t : std::sqrt(2.0 * t);
  for (int it = 0; it < 60; ++it) {
    const double q = std::sqrt(1.0 + r * r);
    const double F = 0.5 * (r * q + std::asinh(r)) - t;
    const double dr = F / q;
    r -= dr;
    if (r < 0.0) r = 0.5 * (r + dr);
    if (std::abs(dr) <= 1e-16 * std::max(1.0, r)) break;
  }
  return r;
}

double smoothed_cone_f(double a, double t) { return a * t + (1.0 - a) * std::tanh(t); }

double smoothed_cone_fp(double a, double t) {
  const double c = std::cosh(t);
  return a + (1.0 - a) / (c * c);
}

double spike_depth(const SpikeParams& p, int n) { return p.depth0 * std::pow(p.growth, n); }

double spike_center(const SpikeParams& p, int n) { return p.first + n * p.spacing; }

double spike_width(const SpikeParams& p, int n) {
  const double mass = p.mass0 / ((n + 1.0) * (n + 1.0));
  return mass / (spike_depth(p, n) * std::sqrt(std::numbers::pi) * (1.0 + spike_center(p, n)));
}

}  // namespace catalog_forms

namespace {

double tanh_over_t(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 3.0 + 2.0 * t2 * t2 / 15.0;
  }
  return std::tanh(t) / t;
}

double cone_curvature(double a, double t) {
  // G = -f''/f with f = a t + (1-a) tanh t.
  t = std::abs(t);
  const double c = std::cosh(t);
  const double sech2 = 1.0 / (c * c);
  const double r = tanh_over_t(t);
  return 2.0 * (1.0 - a) * sech2 * r / (a + (1.0 - a) * r);
}

struct Pchip {
  std::vector<double> t, g, d;

  double operator()(double x) const {
    if (x <= t.front()) return g.front();
    if (x >= t.back()) return g.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[k + 1] - t[k];
    const double s = (x - t[k]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * g[k] + (s3 - 2 * s2 + s) * h * d[k] + (-2 * s3 + 3 * s2) * g[k + 1] +
           (s3 - s2) * h * d[k + 1];
  }
};

double sign(double v) { return (v > 0) - (v < 0); }

std::vector<double> pchip_slopes(const std::vector<double>& t, const std::vector<double>& g) {
  const std::size_t n = t.size();
  std::vector<double> h(n - 1), del(n - 1), d(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = t[k + 1] - t[k];
    del[k] = (g[k + 1] - g[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = del[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (del[k - 1] * del[k] <= 0.0) continue;
    const double w1 = 2 * h[k] + h[k - 1];
    const double w2 = h[k] + 2 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign(s) != sign(d0)) return 0.0;
    if (sign(d0) != sign(d1) && std::abs(s) > 3 * std::abs(d0)) return 3 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], del[0], del[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  return d;
}

}  // namespace

RadialCurvature RadialCurvature::plane() {
  RadialCurvature g("plane", [](double) { return 0.0; });
  return g;
}

RadialCurvature RadialCurvature::hyperbolic() {
  RadialCurvature g("hyperbolic", [](double) { return -1.0; });
  return g;
}

RadialCurvature RadialCurvature::constant(double k) {
  if (!std::isfinite(k)) throw BadParameter("constant curvature k must be finite");
  RadialCurvature g("constant", [k](double) { return k; });
  g.params_["k"] = k;
  return g;
}

RadialCurvature RadialCurvature::paraboloid() {
  RadialCurvature g("paraboloid", [](double t) {
    const double r = catalog_forms::paraboloid_radius(std::abs(t));
    const double q = 1.0 + r * r;
    return 1.0 / (q * q);
  });
  return g;
}

RadialCurvature RadialCurvature::smoothed_cone(double a) {
  if (!(a > 0.0 && a < 1.0)) throw BadParameter("smoothed_cone requires a in (0, 1)");
  RadialCurvature g("smoothed_cone", [a](double t) { return cone_curvature(a, t); });
  g.params_["a"] = a;
  return g;
}

RadialCurvature RadialCurvature::bump(double amplitude, double center, double width) {
  if (!std::isfinite(amplitude)) throw BadParameter("bump amplitude must be finite");
  if (!(center >= 0.0) || !std::isfinite(center)) throw BadParameter("bump center must be >= 0");
  if (!(width > 0.0) || !std::isfinite(width)) throw BadParameter("bump width must be > 0");
  // Positive lobe before `center`, negative lobe after; peak |G| = amplitude.
  const double scale = amplitude * std::sqrt(2.0 * std::numbers::e);
  RadialCurvature g("bump", [scale, center, width](double t) {
    const double x = (std::abs(t) - center) / width;
    return -scale * x * std::exp(-x * x);
  });
  g.params_["amplitude"] = amplitude;
  g.params_["center"] = center;
  g.params_["width"] = width;
  g.features_.push_back({std::max(0.0, center - 4 * width), center + 4 * width, width / 8});
  return g;
}

RadialCurvature RadialCurvature::spike(const SpikeParams& p) {
  if (!(p.a > 0.0 && p.a < 1.0)) throw BadParameter("spike requires background slope a in (0, 1)");
  if (!(p.depth0 > 0.0) || !(p.growth >= 1.0)) throw BadParameter("spike depths must be positive and growing");
  if (!(p.first > 0.0) || !(p.spacing > 0.0) || !(p.mass0 > 0.0))
    throw BadParameter("spike first, spacing and mass0 must be positive");
  auto shared = std::make_shared<const SpikeParams>(p);
  RadialCurvature g("spike", [shared](double t) {
    const SpikeParams& q = *shared;
    t = std::abs(t);
    double value = cone_curvature(q.a, t);
    const int nearest = static_cast<int>(std::lround((t - q.first) / q.spacing));
    for (int n = std::max(0, nearest - 1); n <= std::max(0, nearest + 1); ++n) {
      const double x = (t - catalog_forms::spike_center(q, n)) / catalog_forms::spike_width(q, n);
      if (std::abs(x) < 40.0) value -= catalog_forms::spike_depth(q, n) * std::exp(-x * x);
    }
    return value;
  });
  g.params_ = {{"a", p.a},         {"depth0", p.depth0},   {"growth", p.growth},
               {"first", p.first}, {"spacing", p.spacing}, {"mass0", p.mass0}};
  g.spike_ = shared;
  return g;
}

RadialCurvature RadialCurvature::tabulated(std::vector<double> t, std::vector<double> g) {
  if (t.size() != g.size() || t.size() < 2) throw BadParameter("tabulated curvature needs >= 2 (t, G) rows");
  if (t.front() != 0.0) throw BadParameter("tabulated curvature must start at t = 0");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(t[k]) || !std::isfinite(g[k])) throw BadParameter("tabulated curvature has non-finite entry");
    if (k > 0 && !(t[k] > t[k - 1])) throw BadParameter("tabulated t must be strictly increasing");
  }
  auto table = std::make_shared<Pchip>();
  table->d = pchip_slopes(t, g);
  table->t = std::move(t);
  table->g = std::move(g);
  RadialCurvature out("tabulated", [table](double x) { return (*table)(std::abs(x)); });
  for (std::size_t k = 0; k + 1 < table->t.size(); ++k)
    out.features_.push_back({table->t[k], table->t[k + 1], 1e300});
  out.domain_end_ = table->t.back();
  out.params_["knots"] = static_cast<double>(table->t.size());
  return out;
}

std::vector<Feature> RadialCurvature::features_up_to(double t_max) const {
  std::vector<Feature> out;
  for (const Feature& f : features_)
    if (f.begin < t_max) out.push_back({f.begin, std::min(f.end, t_max), f.max_step});
  if (spike_) {
    const SpikeParams& p = *spike_;
    for (int n = 0;; ++n) {
      const double c = catalog_forms::spike_center(p, n);
      const double w = catalog_forms::spike_width(p, n);
      if (c - 12 * w >= t_max) break;
      out.push_back({std::max(0.0, c - 12 * w), std::min(t_max, c + 12 * w), w / 6});
    }
  }
  std::sort(out.begin(), out.end(), [](const Feature& x, const Feature& y) { return x.begin < y.begin; });
  return out;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kWarpVanishes: return "WarpVanishes";
    case ErrorKind::kNonFiniteCurvature: return "NonFiniteCurvature";
    case ErrorKind::kBadParameter: return "BadParameter";
    case ErrorKind::kLeftDomain: return "LeftDomain";
    case ErrorKind::kPoleHit: return "PoleHit";
    case ErrorKind::kZeroVector: return "ZeroVector";
    case ErrorKind::kNoConnectionFound: return "NoConnectionFound";
    case ErrorKind::kNoSolutionInSector: return "NoSolutionInSector";
    case ErrorKind::kMonotonicityViolation: return "MonotonicityViolation";
    case ErrorKind::kHorizonTooSmall: return "HorizonTooSmall";
    case ErrorKind::kTotalCurvatureNotAbovePi: return "TotalCurvatureNotAbovePi";
    case ErrorKind::kCoveringFailed: return "CoveringFailed";
    case ErrorKind::kGateFailed: return "GateFailed";
    case ErrorKind::kInput: return "InputError";
  }
  return "Error";
}

namespace {
std::string fmt_num(const char* label, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(%.12g)", label, v);
  return buf;
}
}  // namespace

WarpVanishes::WarpVanishes(double t_star)
    : Error(ErrorKind::kWarpVanishes, fmt_num("WarpVanishes", t_star), t_star) {}
NonFiniteCurvature::NonFiniteCurvature(double t)
    : Error(ErrorKind::kNonFiniteCurvature, fmt_num("NonFiniteCurvature at t=", t), t) {}
LeftDomain::LeftDomain(double s) : Error(ErrorKind::kLeftDomain, fmt_num("LeftDomain at s=", s), s) {}
PoleHit::PoleHit(double s) : Error(ErrorKind::kPoleHit, fmt_num("PoleHit at s=", s), s) {}
HorizonTooSmall::HorizonTooSmall(double s)
    : Error(ErrorKind::kHorizonTooSmall, fmt_num("HorizonTooSmall: left domain at s=", s), s) {}
TotalCurvatureNotAbovePi::TotalCurvatureNotAbovePi(double c_minus_bound)
    : Error(ErrorKind::kTotalCurvatureNotAbovePi,
            fmt_num("TotalCurvatureNotAbovePi: c - bound =", c_minus_bound), c_minus_bound) {}

}  // namespace revlab
