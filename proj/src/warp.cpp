#include "revlab/warp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "revlab/errors.hpp"
#include "revlab/ode.hpp"

namespace revlab {

namespace {

// Quintic Hermite interpolation on [0, h] from values, first and second
// derivatives at both ends. Returns (p, p', p'') at offset dt.
WarpValue quintic(double h, double dt, double p0, double m0, double a0, double p1, double m1, double a1) {
  const double x = dt / h;
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  const double M0 = m0 * h, M1 = m1 * h, A0 = a0 * h * h, A1 = a1 * h * h;

  const double H1 = x - 6 * x3 + 8 * x4 - 3 * x5;
  const double H2 = 0.5 * (x2 - 3 * x3 + 3 * x4 - x5);
  const double H3 = 0.5 * (x3 - 2 * x4 + x5);
  const double H4 = -4 * x3 + 7 * x4 - 3 * x5;
  const double H5 = 10 * x3 - 15 * x4 + 6 * x5;

  const double D0 = -30 * x2 + 60 * x3 - 30 * x4;
  const double D1 = 1 - 18 * x2 + 32 * x3 - 15 * x4;
  const double D2 = 0.5 * (2 * x - 9 * x2 + 12 * x3 - 5 * x4);
  const double D3 = 0.5 * (3 * x2 - 8 * x3 + 5 * x4);
  const double D4 = -12 * x2 + 28 * x3 - 15 * x4;

  const double E0 = -60 * x + 180 * x2 - 120 * x3;
  const double E1 = -36 * x + 96 * x2 - 60 * x3;
  const double E2 = 0.5 * (2 - 18 * x + 36 * x2 - 20 * x3);
  const double E3 = 0.5 * (6 * x - 24 * x2 + 20 * x3);
  const double E4 = -24 * x + 84 * x2 - 60 * x3;

  // Written in terms of p1 - p0 so short intervals do not cancel.
  const double dlt = p1 - p0;
  const double p = p0 + H5 * dlt + H1 * M0 + H2 * A0 + H3 * A1 + H4 * M1;
  const double dp = -D0 * dlt + D1 * M0 + D2 * A0 + D3 * A1 + D4 * M1;
  const double ddp = -E0 * dlt + E1 * M0 + E2 * A0 + E3 * A1 + E4 * M1;
  return {p, dp / h, ddp / (h * h)};
}

}  // namespace

void WarpFunction::push(double t, double f, double fp, double fpp) {
  t_.push_back(t);
  f_.push_back(f);
  fp_.push_back(fp);
  fpp_.push_back(fpp);
}

void WarpFunction::build_index() {
  const std::size_t n = t_.size();
  const std::size_t nb = std::max<std::size_t>(16, 2 * n);
  bucket_width_ = t_.back() / static_cast<double>(nb);
  bucket_.assign(nb, 0);
  std::size_t k = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    const double edge = static_cast<double>(b) * bucket_width_;
    while (k + 1 < n && t_[k + 1] <= edge) ++k;
    bucket_[b] = k;
  }
}

std::size_t WarpFunction::interval(double t) const {
  const std::size_t n = t_.size();
  if (t <= 0.0) return 0;
  if (t >= t_[n - 2]) return n - 2;
  const std::size_t nb = bucket_.size();
  const std::size_t b = std::min(nb - 1, static_cast<std::size_t>(t / bucket_width_));
  const std::size_t lo = bucket_[b];
  const std::size_t hi = b + 1 < nb ? bucket_[b + 1] : n - 1;
  const auto first = t_.begin() + static_cast<std::ptrdiff_t>(lo);
  const auto last = t_.begin() + static_cast<std::ptrdiff_t>(hi) + 1;
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(first, last, t) - t_.begin()) - 1;
  return std::min(i, n - 2);
}

WarpValue WarpFunction::operator()(double t) const {
  if (t < 0.0) {
    const WarpValue v = (*this)(-t);
    return {-v.f, v.fp, -v.fpp};
  }
  const std::size_t i = interval(t);
  return quintic(t_[i + 1] - t_[i], t - t_[i], f_[i], fp_[i], fpp_[i], f_[i + 1], fp_[i + 1], fpp_[i + 1]);
}

WarpFunction WarpFunction::solve(const RadialCurvature& curvature, double t_max, double tol) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw BadParameter("t_max must be positive");
  if (!(tol > 0.0) || !(tol < 1e-2)) throw BadParameter("tol must be in (0, 1e-2)");
  if (t_max > curvature.domain_end() * (1.0 + 1e-12))
    throw BadParameter("t_max exceeds the range of the tabulated curvature");

  const std::vector<Feature> features = curvature.features_up_to(t_max);
  std::vector<double> begins, breakpoints;
  for (const Feature& f : features) {
    begins.push_back(f.begin);
    breakpoints.push_back(f.begin);
    breakpoints.push_back(f.end);
  }
  std::sort(breakpoints.begin(), breakpoints.end());

  auto rhs = [&curvature](const ode::State<2>& y, ode::State<2>& dy, double t) {
    const double g = curvature(t);
    if (!std::isfinite(g)) throw NonFiniteCurvature(t);
    dy[0] = y[1];
    dy[1] = -g * y[0];
  };

  const ode::Tolerance tolerance{tol, tol * 1e-3};
  ode::Rkf78<2> rk(tolerance);
  WarpFunction w;
  w.diag_.tol = tol;

  if (!std::isfinite(curvature(0.0))) throw NonFiniteCurvature(0.0);
  double t = 0.0;
  ode::State<2> x{0.0, 1.0};
  w.push(0.0, 0.0, 1.0, 0.0);

  double h = std::min(1e-6, t_max);
  std::size_t bp = 0;
  while (t < t_max) {
    while (bp < breakpoints.size() && breakpoints[bp] <= t * (1.0 + 1e-14)) ++bp;
    const double limit = bp < breakpoints.size() ? std::min(t_max, breakpoints[bp]) : t_max;
    double h_cap = std::numeric_limits<double>::infinity();
    const auto it = std::upper_bound(begins.begin(), begins.end(), t);
    if (it != begins.begin()) {
      const Feature& f = features[static_cast<std::size_t>(it - begins.begin()) - 1];
      if (t < f.end) h_cap = f.max_step;
    }
    double step = std::min({h, limit - t, h_cap});
    const bool to_limit = step >= limit - t;
    if (to_limit) step = limit - t;

    ode::State<2> trial = x, err{};
    double t_trial = t, h_next = step;
    if (!rk.try_step(rhs, trial, t_trial, h_next, &err)) {
      ++w.diag_.rejected_steps;
      h = h_next;
      if (h < 1e-14 * std::max(1.0, t)) throw BadParameter("warp step size underflow near t=" + std::to_string(t));
      continue;
    }
    if (to_limit) t_trial = limit;

    if (trial[0] <= 0.0) {
      const double dz = ode::locate_event(
          rk, rhs, x, t, step, [](const ode::State<2>& y) { return y[0]; }, x[0], trial[0],
          1e-15 * std::max(1.0, t));
      throw WarpVanishes(t + dz);
    }

    // The interpolant must agree with an RK half step at the midpoint.
    const ode::State<2> mid = rk.advance(rhs, x, t, 0.5 * step);
    const double g1 = curvature(t_trial);
    const WarpValue q = quintic(step, 0.5 * step, x[0], x[1], w.fpp_.back(), trial[0], trial[1], -g1 * trial[0]);
    const double df = std::abs(q.f - mid[0]);
    const double dfp = std::abs(q.fp - mid[1]);
    // Roundoff floor: f' of the interpolant divides differences of f by the step.
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale_f = std::abs(x[0]) + std::abs(trial[0]);
    const double scale_fp = std::abs(x[1]) + std::abs(trial[1]);
    if (df > 10.0 * (tolerance.abs + tol * std::abs(mid[0])) + 64.0 * eps * scale_f ||
        dfp > 10.0 * (tolerance.abs + tol * std::abs(mid[1])) + 64.0 * eps * (scale_fp + scale_f / step)) {
      ++w.diag_.rejected_steps;
      h = 0.5 * step;
      if (h < 1e-14 * std::max(1.0, t)) throw BadParameter("warp interpolation cannot meet tol near t=" + std::to_string(t));
      continue;
    }
    w.diag_.interpolation_defect = std::max(
        w.diag_.interpolation_defect, std::max(df / (std::abs(mid[0]) + 1e-300), dfp / (std::abs(mid[1]) + 1e-300)));

    ++w.diag_.accepted_steps;
    w.diag_.ivp_error_estimate += std::abs(err[1]);
    x = trial;
    t = t_trial;
    w.push(t, x[0], x[1], -g1 * x[0]);
    h = to_limit ? std::max(h, h_next) : h_next;
  }
  w.build_index();

  for (std::size_t i = 0; i + 1 < w.t_.size(); ++i) {
    const double tm = 0.5 * (w.t_[i] + w.t_[i + 1]);
    const WarpValue v = w(tm);
    w.diag_.midpoint_residual = std::max(w.diag_.midpoint_residual, std::abs(v.fpp + curvature(tm) * v.f));
  }
  return w;
}

}  // namespace revlab
