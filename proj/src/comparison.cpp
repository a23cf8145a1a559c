#include "revlab/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "revlab/errors.hpp"
#include "revlab/parallel.hpp"

namespace revlab {

DominationCertificate radial_domination(const SurfaceModel& M, const SurfaceModel& model, double tol) {
  DominationCertificate c;
  c.m_id = M.id();
  c.model_id = model.id();
  const double T = std::min(M.t_max(), model.t_max());
  std::vector<double> grid;
  for (double t : M.warp().t())
    if (t <= T) grid.push_back(t);
  for (double t : model.warp().t())
    if (t <= T) grid.push_back(t);
  grid.push_back(T);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  c.margin = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const double m = M.G(t) - model.G(t);
    if (m < c.margin) {
      c.margin = m;
      c.at_t = t;
    }
  }
  c.samples = grid.size();
  c.certified = c.margin >= -tol;
  return c;
}

Quantiles quantiles(std::vector<double> v) {
  Quantiles q;
  if (v.empty()) return q;
  std::sort(v.begin(), v.end());
  auto rank = [&](double p) {
    const std::size_t i = static_cast<std::size_t>(std::ceil(p * v.size()));
    return v[std::clamp<std::size_t>(i, 1, v.size()) - 1];
  };
  q.min = v.front();
  q.p50 = rank(0.5);
  q.p95 = rank(0.95);
  return q;
}

TctReport verify_tct(const SurfaceModel& M, const SurfaceModel& model, double delta0, const TctOptions& options) {
  TctReport rep;
  rep.m_id = M.id();
  rep.model_id = model.id();
  rep.delta0 = delta0;
  rep.n = options.n;
  rep.domination = radial_domination(M, model, options.domination_tol);
  if (!rep.domination.certified)
    throw GateFailed("'" + M.id() + "' does not radially dominate '" + model.id() + "' (margin " +
                     std::to_string(rep.domination.margin) + " at t = " + std::to_string(rep.domination.at_t) + ")");
  if (!(delta0 > 2.0 * options.apex_margin) || delta0 > std::numbers::pi)
    throw BadParameter("delta0 leaves no room for apex angles");

  const double r_hi = options.r_max_fraction * std::min(M.t_max(), model.t_max());
  const double r_lo = std::min(options.r_min, 0.5 * r_hi);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  rep.samples.resize(options.n);
  for (TctSample& s : rep.samples) {
    s.delta = options.apex_margin + (delta0 - 2.0 * options.apex_margin) * unit(rng);
    s.a = r_lo * std::pow(r_hi / r_lo, unit(rng));
    s.b = r_lo * std::pow(r_hi / r_lo, unit(rng));
  }
  parallel_for(rep.samples.size(), [&](std::size_t i) {
    TctSample& s = rep.samples[i];
    s.in_m = triangle_from_apex(M, s.a, s.b, s.delta, options.comparison.distance);
    try {
      s.in_model = comparison_triangle(model, s.a, s.b, s.in_m.c, delta0, options.comparison);
    } catch (const NoSolutionInSector& e) {
      s.anomaly = e.what();
      return;
    } catch (const MonotonicityViolation& e) {
      s.anomaly = e.what();
      return;
    }
    s.solved = true;
    s.margin_p = s.in_m.angle_p - s.in_model.angle_p;
    s.margin_x = s.in_m.angle_x - s.in_model.angle_x;
    s.margin_y = s.in_m.angle_y - s.in_model.angle_y;
    s.margin = std::min({s.margin_p, s.margin_x, s.margin_y});
  });
  std::vector<double> margins;
  for (const TctSample& s : rep.samples) {
    if (!s.solved) {
      ++rep.anomalies;
      continue;
    }
    if (s.margin < -options.tol) ++rep.violations;
    margins.push_back(s.margin);
  }
  rep.margins = quantiles(margins);
  return rep;
}

MonotonicityReport alexandrov_monotonicity(const SurfaceModel& M, const SurfaceModel& model, double a, double b,
                                           double delta, const std::vector<double>& scales, double delta0,
                                           const ComparisonOptions& options) {
  MonotonicityReport rep;
  for (double s : scales) {
    const TriangleData tm = triangle_from_apex(M, s * a, s * b, delta, options.distance);
    const TriangleData tc = comparison_triangle(model, s * a, s * b, tm.c, delta0, options);
    rep.points.push_back({s, tm.angle_p, tc.angle_p});
  }
  std::vector<ScalePoint> sorted = rep.points;
  std::sort(sorted.begin(), sorted.end(), [](const ScalePoint& p, const ScalePoint& q) { return p.scale < q.scale; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].apex_model > sorted[i - 1].apex_model + 1e-9) rep.model_apex_non_increasing = false;
  return rep;
}

}  // namespace revlab
