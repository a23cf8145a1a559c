#include <algorithm>
#include <cmath>

#include "revlab/kernels/fan_step.hpp"

namespace revlab::kernels {

namespace {

struct Deriv {
  double dt, dtheta, du, dw;
};

inline void eval_one(const WarpTable& table, double t, double& f, double& fp) {
  const double sign = t < 0.0 ? -1.0 : 1.0;
  const double at = std::abs(t);
  const double last = static_cast<double>(table.size() - 2);
  const double k = std::min(std::max(std::floor(at * table.inv_dt), 0.0), last);
  const double xr = at * table.inv_dt - k;
  const double x = std::min(xr, 1.0);
  const std::size_t i = static_cast<std::size_t>(k);
  const double x2 = x * x, x3 = x2 * x;
  const double h = table.dt;
  const double f0 = table.f[i], f1 = table.f[i + 1];
  const double m0 = table.fp[i] * h, m1 = table.fp[i + 1] * h;
  const double p = (2 * x3 - 3 * x2 + 1) * f0 + (x3 - 2 * x2 + x) * m0 + (-2 * x3 + 3 * x2) * f1 + (x3 - x2) * m1;
  const double dp = (6 * x2 - 6 * x) * f0 + (3 * x2 - 4 * x + 1) * m0 + (-6 * x2 + 6 * x) * f1 + (3 * x2 - 2 * x) * m1;
  // Past the last sample the warp continues along its tangent line.
  f = sign * (p + (xr - x) * m1);
  fp = dp * table.inv_dt;
}

inline Deriv rhs(const WarpTable& table, double t, double u, double w) {
  double f, fp;
  eval_one(table, t, f, fp);
  const double ratio = f == 0.0 ? 0.0 : fp / f;
  return {u, w, f * fp * w * w, -2.0 * ratio * u * w};
}

}  // namespace

void warp_eval_scalar(const WarpTable& table, std::span<const double> t, std::span<double> f, std::span<double> fp) {
  for (std::size_t i = 0; i < t.size(); ++i) eval_one(table, t[i], f[i], fp[i]);
}

void fan_rk4_step_scalar(const WarpTable& table, FanLanes lanes) {
  for (std::size_t i = 0; i < lanes.t.size(); ++i) {
    const double h = lanes.h[i];
    if (h == 0.0) continue;
    const double t = lanes.t[i], th = lanes.theta[i], u = lanes.u[i], w = lanes.w[i];
    const Deriv k1 = rhs(table, t, u, w);
    const double hh = 0.5 * h;
    const Deriv k2 = rhs(table, t + hh * k1.dt, u + hh * k1.du, w + hh * k1.dw);
    const Deriv k3 = rhs(table, t + hh * k2.dt, u + hh * k2.du, w + hh * k2.dw);
    const Deriv k4 = rhs(table, t + h * k3.dt, u + h * k3.du, w + h * k3.dw);
    const double s = h / 6.0;
    lanes.t[i] = t + s * (k1.dt + 2 * k2.dt + 2 * k3.dt + k4.dt);
    lanes.theta[i] = th + s * (k1.dtheta + 2 * k2.dtheta + 2 * k3.dtheta + k4.dtheta);
    lanes.u[i] = u + s * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
    lanes.w[i] = w + s * (k1.dw + 2 * k2.dw + 2 * k3.dw + k4.dw);
  }
}

}  // namespace revlab::kernels
