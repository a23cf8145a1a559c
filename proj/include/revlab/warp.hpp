#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "revlab/curvature.hpp"

namespace revlab {

struct WarpValue {
  double f;
  double fp;
  double fpp;
};

// Diagnostics of the IVP solve, reported alongside the samples.
struct WarpDiagnostics {
  double tol = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  double ivp_error_estimate = 0.0;     // sum of |local error| in f' over accepted steps
  double interpolation_defect = 0.0;   // max relative midpoint gap, interpolant vs RK step
  double midpoint_residual = 0.0;      // max |f'' + G f| of the interpolant at interval midpoints
};

// Solution of f'' + G f = 0, f(0) = 0, f'(0) = 1 on [0, t_max], stored at the
// adaptive step knots together with f'' = -G f. Between knots f is the
// quintic Hermite interpolant of (f, f', f''), so f' below is exactly the
// derivative of f.
class WarpFunction {
 public:
  static WarpFunction solve(const RadialCurvature& curvature, double t_max, double tol);

  // f is extended as an odd function to t < 0; beyond t_max the last interval
  // polynomial is extrapolated (only reached by trial RK stages).
  WarpValue operator()(double t) const;
  double f(double t) const { return (*this)(t).f; }

  std::span<const double> t() const { return t_; }
  std::span<const double> f_samples() const { return f_; }
  std::span<const double> fp_samples() const { return fp_; }
  std::span<const double> fpp_samples() const { return fpp_; }
  std::size_t size() const { return t_.size(); }
  double t_max() const { return t_.back(); }
  const WarpDiagnostics& diagnostics() const { return diag_; }

  // Index i with t_[i] <= t < t_[i+1], clamped to valid intervals.
  std::size_t interval(double t) const;

 private:
  void push(double t, double f, double fp, double fpp);
  void build_index();

  std::vector<double> t_, f_, fp_, fpp_;
  std::vector<std::size_t> bucket_;
  double bucket_width_ = 1.0;
  WarpDiagnostics diag_;
};

}  // namespace revlab
