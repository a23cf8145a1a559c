#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace revlab {

// A region of t where the curvature has a feature narrower than the natural
// step of an adaptive integrator. Integrators land exactly on `begin`/`end`
// and never step further than `max_step` inside.
struct Feature {
  double begin;
  double end;
  double max_step;
};

// Parameters of the spike family. Spike n sits at first + n*spacing with depth
// depth0 * growth^n on top of a smoothed cone of slope `a`; its width is set so
// that mass_n = depth_n * width_n * sqrt(pi) * (1 + t_n) = mass0 / (n+1)^2.
struct SpikeParams {
  double a = 0.5;
  double depth0 = 10.0;
  double growth = 2.0;
  double first = 5.0;
  double spacing = 5.0;
  double mass0 = 0.2;
};

// Radial curvature G(t) of a model surface, t the distance to the pole.
class RadialCurvature {
 public:
  static RadialCurvature plane();
  static RadialCurvature hyperbolic();
  static RadialCurvature constant(double k);
  static RadialCurvature paraboloid();
  static RadialCurvature smoothed_cone(double a);
  static RadialCurvature bump(double amplitude, double center, double width);
  static RadialCurvature spike(const SpikeParams& p);
  // Monotone (Fritsch-Carlson) cubic through the knots; t[0] must be 0.
  static RadialCurvature tabulated(std::vector<double> t, std::vector<double> g);

  double operator()(double t) const { return eval_(t); }

  const std::string& kind() const { return kind_; }
  const std::map<std::string, double>& parameters() const { return params_; }
  // Narrow features in [0, t_max]. The spike family has infinitely many, so
  // the list is generated per horizon.
  std::vector<Feature> features_up_to(double t_max) const;
  // Largest t for which the curvature is defined (tabulated data ends there).
  double domain_end() const { return domain_end_; }

 private:
  RadialCurvature(std::string kind, std::function<double(double)> eval)
      : kind_(std::move(kind)), eval_(std::move(eval)) {}

  std::string kind_;
  std::function<double(double)> eval_;
  std::map<std::string, double> params_;
  std::vector<Feature> features_;  // fixed features (tabulated knots, bump core)
  std::shared_ptr<const SpikeParams> spike_;
  double domain_end_ = 1e300;
};

namespace catalog_forms {

// Closed-form pieces shared by the catalog and its users.
double paraboloid_radius(double t);             // r with t = (r sqrt(1+r^2) + asinh r) / 2
double smoothed_cone_f(double a, double t);     // a t + (1-a) tanh t
double smoothed_cone_fp(double a, double t);
double spike_depth(const SpikeParams& p, int n);
double spike_center(const SpikeParams& p, int n);
double spike_width(const SpikeParams& p, int n);

}  // namespace catalog_forms

}  // namespace revlab
