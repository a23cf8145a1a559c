#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revlab/curvature.hpp"
#include "revlab/kernels/fan_step.hpp"
#include "revlab/warp.hpp"

namespace revlab {

struct TotalCurvature {
  double c_limit = 0.0;     // 2 pi (1 - f'(T))
  double c_integral = 0.0;  // 2 pi int_0^T G f dt
  double bound = 0.0;       // |c_limit - c_integral| + 2 pi (ivp + quadrature error estimates)
  double ivp_error = 0.0;
  double quadrature_error = 0.0;
  double tail_at_half = 0.0;  // 2 pi int_{T/2}^T |G| f, a truncation indicator
  // Iterated Aitken extrapolation of f'(T 0.9^k), k = 0..8, to T -> infinity,
  // for surfaces whose f' converges slowly. The error is the change between
  // the last two extrapolation levels.
  double c_extrapolated = 0.0;
  double extrapolation_error = 0.0;
  bool finite = true;         // neither signed part looks divergent
  bool labeled = true;        // false when both signed parts look divergent
};

struct SignedIntegrals {
  double plus = 0.0;   // 2 pi int G+ f >= 0
  double minus = 0.0;  // 2 pi int G- f <= 0
};

// Model surface dt^2 + f(t)^2 dtheta^2 on [0, t_max]. Immutable once built.
class SurfaceModel {
 public:
  SurfaceModel(RadialCurvature curvature, double t_max, double tol, std::string id = {});

  const RadialCurvature& curvature() const { return g_; }
  const WarpFunction& warp() const { return warp_; }
  const kernels::WarpTable& table() const { return table_; }
  double t_max() const { return t_max_; }
  double tol() const { return tol_; }
  const std::string& id() const { return id_; }

  double G(double t) const { return g_(t); }
  WarpValue at(double t) const { return warp_(t); }
  double f(double t) const { return warp_(t).f; }

  TotalCurvature total_curvature() const;
  SignedIntegrals signed_curvature_integrals() const;
  // 2 pi int_r^T |G| f dt, non-increasing in r.
  double tail_integral(double r) const;
  // 2 pi int_0^T G f dt for any T in [0, t_max].
  double curvature_integral(double T) const;
  // max over knots T of |2 pi (1 - f'(T)) - 2 pi int_0^T G f|.
  double identity_residual() const;
  bool is_von_mangoldt() const;
  // First knot pair (t1 < t2) with G(t1) < G(t2) beyond the slack, if any.
  std::optional<std::pair<double, double>> von_mangoldt_witness() const;
  double min_curvature_on_grid() const;
  // Smallest knot radius >= r_min beyond which the tail integral is below eps,
  // or t_max if none: past it geodesics are straight lines of a cone.
  double flat_radius(double r_min, double eps) const;
  // Curvature features that need a bounded step, sorted by begin.
  const std::vector<Feature>& narrow_features() const { return features_; }

 private:
  enum Part { kSigned, kPositive, kNegative, kAbsolute };
  double partial(Part part, double T) const;

  RadialCurvature g_;
  double t_max_;
  double tol_;
  std::string id_;
  WarpFunction warp_;
  kernels::WarpTable table_;
  // Cumulative integrals of G f, G+ f, G- f, |G| f at knots (without 2 pi).
  std::vector<double> cum_[4];
  double quad_error_ = 0.0;
  std::vector<Feature> features_;
};

// Default horizon of each catalog family.
double default_t_max(const std::string& name);

// Catalog names: plane, hyperbolic, constant(k), paraboloid, smoothed_cone(a),
// bump(amplitude, center, width), spike(a, depth0, growth, first, spacing,
// mass0). Missing parameters take the catalog defaults.
SurfaceModel catalog(const std::string& name, const std::map<std::string, double>& params = {},
                     std::optional<double> t_max = {}, std::optional<double> tol = {});

inline constexpr double kDefaultTol = 1e-12;

}  // namespace revlab
