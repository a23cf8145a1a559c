#include "revlab/fan.hpp"

#include <algorithm>
#include <cmath>

namespace revlab {

FanScan::FanScan(const SurfaceModel& S, double t0, std::span<const double> phis, std::span<const double> targets,
                 double length_cap, kernels::Isa isa)
    : n_(phis.size()), m_(targets.size()), hits_(n_ * m_) {
  const std::size_t padded = (n_ + 3) / 4 * 4;
  std::vector<double> t(padded, t0), theta(padded, 0.0), u(padded, 0.0), w(padded, 0.0), h(padded, 0.0);
  std::vector<double> s(padded, 0.0);
  std::vector<std::size_t> next(padded, 0);
  std::vector<char> active(padded, 0);
  const double f0 = S.f(t0);
  for (std::size_t i = 0; i < n_; ++i) {
    u[i] = std::cos(phis[i]);
    w[i] = std::sin(phis[i]) / f0;
    active[i] = m_ > 0;
  }
  const double t_stop = S.t_max();
  std::vector<double> t_old(padded), th_old(padded);

  std::size_t live = static_cast<std::size_t>(std::count(active.begin(), active.end(), 1));
  while (live > 0) {
    for (std::size_t i = 0; i < padded; ++i) {
      if (!active[i]) {
        h[i] = 0.0;
        continue;
      }
      double step = 0.02 * std::max(t[i], 0.02);
      if (w[i] != 0.0) step = std::min(step, 0.02 / std::abs(w[i]));
      h[i] = std::min(step, length_cap - s[i]);
      t_old[i] = t[i];
      th_old[i] = theta[i];
    }
    kernels::fan_rk4_step(isa, S.table(), {t, theta, u, w, h});
    ++steps_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!active[i]) continue;
      const double s_old = s[i];
      s[i] += h[i];
      while (next[i] < m_ && theta[i] >= targets[next[i]]) {
        const double a = (targets[next[i]] - th_old[i]) / (theta[i] - th_old[i]);
        ThetaCrossing& c = hits_[i * m_ + next[i]];
        c.reached = true;
        c.t = t_old[i] + a * (t[i] - t_old[i]);
        c.s = s_old + a * h[i];
        ++next[i];
      }
      const bool done = next[i] == m_ || s[i] >= length_cap * (1.0 - 1e-15) || t[i] > t_stop || !(t[i] > 0.0);
      if (done) {
        active[i] = 0;
        --live;
      }
    }
  }
}

}  // namespace revlab
