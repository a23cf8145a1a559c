#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "revlab/busemann.hpp"
#include "revlab/comparison.hpp"
#include "revlab/cutlocus.hpp"
#include "revlab/geodesic.hpp"
#include "revlab/spec_file.hpp"
#include "revlab/surface.hpp"

namespace revlab::report {

using json = nlohmann::ordered_json;

// Output is byte-stable: keys keep insertion order and numbers print in
// shortest round-trip form.
void write_json(const std::filesystem::path& path, const json& j);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct PolarChart {
  std::string title;
  double r_max = 1.0;
  std::vector<std::vector<std::pair<double, double>>> curves;  // (t, theta)
  std::vector<std::pair<double, double>> points;               // (t, theta)
  std::string curve_label = "geodesics", point_label = "points";
};

struct LineSeries {
  std::string label;
  std::vector<std::pair<double, double>> xy;
};

struct LineChart {
  std::string title, x_label, y_label;
  std::vector<LineSeries> series;
};

void write_polar_svg(const std::filesystem::path& path, const PolarChart& chart);
void write_line_svg(const std::filesystem::path& path, const LineChart& chart);

json to_json(const SurfaceSpec& spec);
json to_json(const TotalCurvature& tc);
json surface_summary(const SurfaceModel& S);
json to_json(const LemmaConstants& c);
json to_json(const BusemannEstimate& e);
json to_json(const CutDistance& c);
json to_json(const DominationCertificate& d);
json to_json(const Quantiles& q);

}  // namespace revlab::report
