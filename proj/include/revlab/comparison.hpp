#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "revlab/distance.hpp"
#include "revlab/surface.hpp"

namespace revlab {

struct DominationCertificate {
  std::string m_id, model_id;
  double margin = 0.0;  // min over the grid of G_M - G_model
  double at_t = 0.0;    // where the minimum sits
  std::size_t samples = 0;
  bool certified = false;
};

// Compares the curvatures on the union of both warp grids up to the shorter
// horizon.
DominationCertificate radial_domination(const SurfaceModel& M, const SurfaceModel& model, double tol = 1e-12);

struct TctOptions {
  int n = 200;
  std::uint64_t seed = 7;
  double tol = 1e-4;
  double apex_margin = 0.05;  // apex angles drawn in (margin, delta0 - margin)
  double r_min = 0.1;
  double r_max_fraction = 0.8;
  double domination_tol = 1e-12;
  ComparisonOptions comparison;
};

struct TctSample {
  double a = 0.0, b = 0.0, delta = 0.0;
  TriangleData in_m, in_model;
  double margin_p = 0.0, margin_x = 0.0, margin_y = 0.0;  // angle in M minus angle in the model
  double margin = 0.0;                                     // the smallest of the three
  bool solved = false;
  std::string anomaly;  // set when the comparison triangle could not be built
};

struct Quantiles {
  double min = 0.0, p50 = 0.0, p95 = 0.0;
};

struct TctReport {
  std::string m_id, model_id;
  double delta0 = 0.0;
  DominationCertificate domination;
  std::vector<TctSample> samples;
  int n = 0;
  int violations = 0;
  int anomalies = 0;  // triangles with no comparison triangle in the sector
  Quantiles margins;
};

// Throws GateFailed unless M radially dominates the model.
TctReport verify_tct(const SurfaceModel& M, const SurfaceModel& model, double delta0, const TctOptions& options = {});

struct ScalePoint {
  double scale = 0.0;
  double apex_m = 0.0;
  double apex_model = 0.0;
};

struct MonotonicityReport {
  std::vector<ScalePoint> points;
  bool model_apex_non_increasing = true;
};

// Diagnostic: comparison apex angle of the triangle (s a, 0), (s b, delta) as
// the scale s varies.
MonotonicityReport alexandrov_monotonicity(const SurfaceModel& M, const SurfaceModel& model, double a, double b,
                                           double delta, const std::vector<double>& scales, double delta0,
                                           const ComparisonOptions& options = {});

Quantiles quantiles(std::vector<double> v);

}  // namespace revlab
