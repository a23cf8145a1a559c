#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

namespace revlab::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerance {
  double rel = 1e-12;
  double abs = 1e-14;
};

// Adaptive Runge-Kutta-Fehlberg 7(8) stepping. The tableau comes from odeint;
// step-size control, step clamping and event location live here so callers can
// land on breakpoints and bisect inside an accepted step.
template <std::size_t N>
class Rkf78 {
 public:
  explicit Rkf78(Tolerance tol) : tol_(tol) {}

  // Tries a step of size h from (s, x). On acceptance advances both and returns
  // true. Either way h becomes the suggested size for the next attempt. The
  // accepted step's raw error estimate is written to *err if given.
  template <class Rhs>
  bool try_step(const Rhs& rhs, State<N>& x, double& s, double& h, State<N>* err = nullptr) {
    State<N> out, xerr;
    auto sys = [&rhs](const State<N>& y, State<N>& dy, double t) { rhs(y, dy, t); };
    stepper_.do_step(sys, x, s, out, h, xerr);
    double norm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double scale = tol_.abs + tol_.rel * std::max(std::abs(x[i]), std::abs(out[i]));
      norm = std::max(norm, std::abs(xerr[i]) / scale);
    }
    if (!(norm <= 1.0)) {
      const double factor = std::isfinite(norm) ? std::max(0.2, 0.9 * std::pow(norm, -1.0 / 7.0)) : 0.2;
      h *= factor;
      return false;
    }
    x = out;
    s += h;
    if (err) *err = xerr;
    const double grow = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -1.0 / 8.0), 0.2, 5.0);
    h *= grow;
    return true;
  }

  // One uncontrolled step.
  template <class Rhs>
  State<N> advance(const Rhs& rhs, const State<N>& x, double s, double h) {
    State<N> out;
    auto sys = [&rhs](const State<N>& y, State<N>& dy, double t) { rhs(y, dy, t); };
    stepper_.do_step(sys, x, s, out, h);
    return out;
  }

  const Tolerance& tolerance() const { return tol_; }

 private:
  boost::numeric::odeint::runge_kutta_fehlberg78<State<N>> stepper_;
  Tolerance tol_;
};

// Locates the first root of g along an accepted step (s0, x0) -> (s0 + h)
// with g(x0) and g(x1) of opposite sign, using the Illinois variant of regula
// falsi on the step length. Returns the step length to the root.
template <std::size_t N, class Rhs, class G>
double locate_event(Rkf78<N>& stepper, const Rhs& rhs, const State<N>& x0, double s0, double h, const G& g,
                    double g0, double g1, double h_tol, State<N>* at_root = nullptr) {
  double a = 0.0, b = h, ga = g0, gb = g1;
  State<N> xb = stepper.advance(rhs, x0, s0, h);
  int side = 0;
  for (int it = 0; it < 200 && (b - a) > h_tol; ++it) {
    double c = b - gb * (b - a) / (gb - ga);
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    const State<N> xc = stepper.advance(rhs, x0, s0, c);
    const double gc = g(xc);
    if (gc == 0.0) {
      a = b = c;
      xb = xc;
      break;
    }
    if ((gc > 0) == (gb > 0)) {
      b = c;
      gb = gc;
      xb = xc;
      if (side == 1) ga *= 0.5;
      side = 1;
    } else {
      a = c;
      ga = gc;
      if (side == -1) gb *= 0.5;
      side = -1;
    }
  }
  if (at_root) *at_root = xb;
  return b;
}

}  // namespace revlab::ode
