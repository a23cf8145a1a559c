#include "revlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "revlab/errors.hpp"

namespace revlab::report {

namespace {

constexpr const char* kPolarLegend = "point (t, theta) drawn at Euclidean polar coordinates (t, theta)";

std::ofstream open(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot write");
  return out;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string px(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

json optional_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// JSON has no infinities.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open(path);
  out << j.dump(2) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << (std::isnan(row[i]) ? "" : num(row[i]));
    out << '\n';
  }
}

void write_polar_svg(const std::filesystem::path& path, const PolarChart& chart) {
  const double size = 640, c = size / 2, scale = (size / 2 - 40) / std::max(chart.r_max, 1e-12);
  auto X = [&](double t, double th) { return c + scale * t * std::cos(th); };
  auto Y = [&](double t, double th) { return c - scale * t * std::sin(th); };
  auto out = open(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 60 << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"10\" y=\"20\" font-size=\"14\">" << escape(chart.title) << "</text>\n";
  for (int k = 1; k <= 4; ++k)
    out << "<circle cx=\"" << c << "\" cy=\"" << c << "\" r=\"" << px(scale * chart.r_max * k / 4)
        << "\" fill=\"none\" stroke=\"#ddd\"/>\n";
  out << "<line x1=\"" << c << "\" y1=\"" << c << "\" x2=\"" << size - 20 << "\" y2=\"" << c
      << "\" stroke=\"#bbb\"/>\n";
  for (const auto& curve : chart.curves) {
    out << "<polyline fill=\"none\" stroke=\"#2a6fb0\" stroke-width=\"0.7\" points=\"";
    for (const auto& [t, th] : curve) {
      if (t > chart.r_max) break;
      out << px(X(t, th)) << ',' << px(Y(t, th)) << ' ';
    }
    out << "\"/>\n";
  }
  for (const auto& [t, th] : chart.points)
    if (t <= chart.r_max)
      out << "<circle cx=\"" << px(X(t, th)) << "\" cy=\"" << px(Y(t, th)) << "\" r=\"2\" fill=\"#c0392b\"/>\n";
  out << "<text x=\"10\" y=\"" << size + 15 << "\" font-size=\"11\">" << escape(kPolarLegend) << "; radius shown up to t = "
      << num(chart.r_max) << "</text>\n";
  out << "<text x=\"10\" y=\"" << size + 32 << "\" font-size=\"11\" fill=\"#2a6fb0\">" << escape(chart.curve_label)
      << "</text>\n";
  out << "<text x=\"10\" y=\"" << size + 49 << "\" font-size=\"11\" fill=\"#c0392b\">" << escape(chart.point_label)
      << "</text>\n";
  out << "</svg>\n";
}

void write_line_svg(const std::filesystem::path& path, const LineChart& chart) {
  const double w = 640, h = 420, m = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : chart.series)
    for (const auto& [x, y] : s.xy) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto X = [&](double x) { return m + (w - 2 * m) * (x - x0) / (x1 - x0); };
  auto Y = [&](double y) { return h - m - (h - 2 * m) * (y - y0) / (y1 - y0); };
  static const char* colors[] = {"#2a6fb0", "#c0392b", "#27ae60", "#8e44ad"};
  auto out = open(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"10\" y=\"20\" font-size=\"14\">" << escape(chart.title) << "</text>\n";
  out << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" font-size=\"12\">" << escape(chart.x_label) << " ["
      << num(x0) << ", " << num(x1) << "]</text>\n";
  out << "<text x=\"5\" y=\"" << m - 10 << "\" font-size=\"12\">" << escape(chart.y_label) << " [" << num(y0) << ", "
      << num(y1) << "]</text>\n";
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* col = colors[k % 4];
    out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.xy) out << px(X(x)) << ',' << px(Y(y)) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << w - 200 << "\" y=\"" << 40 + 16 * k << "\" font-size=\"11\" fill=\"" << col << "\">"
        << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

json to_json(const SurfaceSpec& spec) {
  json j;
  j["source"] = spec.source;
  j["kind"] = spec.kind;
  if (!spec.id.empty()) j["id"] = spec.id;
  json p = json::object();
  for (const auto& [k, v] : spec.params) p[k] = v;
  j["params"] = p;
  j["t_max"] = optional_num(spec.t_max);
  j["tol"] = optional_num(spec.tol);
  if (!spec.csv.empty()) j["csv"] = spec.csv.string();
  return j;
}

json to_json(const TotalCurvature& tc) {
  return {{"c_limit", tc.c_limit},
          {"c_integral", tc.c_integral},
          {"bound", tc.bound},
          {"ivp_error", tc.ivp_error},
          {"quadrature_error", tc.quadrature_error},
          {"tail_at_half", tc.tail_at_half},
          {"c_extrapolated", tc.c_extrapolated},
          {"extrapolation_error", tc.extrapolation_error},
          {"finite", tc.finite},
          {"labeled", tc.labeled}};
}

json surface_summary(const SurfaceModel& S) {
  json j;
  j["id"] = S.id();
  j["kind"] = S.curvature().kind();
  json p = json::object();
  for (const auto& [k, v] : S.curvature().parameters()) p[k] = v;
  j["params"] = p;
  j["t_max"] = S.t_max();
  j["tol"] = S.tol();
  j["knots"] = S.warp().t().size();
  return j;
}

json to_json(const LemmaConstants& c) {
  return {{"lambda0", c.lambda0}, {"r1", c.r1}, {"r2", c.r2}, {"r3", finite_or_null(c.r3)}};
}

json to_json(const BusemannEstimate& e) {
  return {{"value", e.value},         {"lower", e.lower},         {"upper", e.upper},        {"horizon", e.horizon},
          {"increment", e.increment}, {"doublings", e.doublings}, {"exhausted", e.exhausted}};
}

json to_json(const CutDistance& c) {
  return {{"phi0", c.phi0},
          {"s_conj", optional_num(c.s_conj)},
          {"s_cross", optional_num(c.s_cross)},
          {"s_cut", optional_num(c.s_cut)},
          {"cause", std::string(to_string(c.cause))},
          {"t_cut", c.s_cut ? json(c.t_cut) : json(nullptr)},
          {"theta_cut", c.s_cut ? json(c.theta_cut) : json(nullptr)},
          {"extrapolated", c.extrapolated}};
}

json to_json(const DominationCertificate& d) {
  return {{"m", d.m_id},           {"model", d.model_id},     {"margin", d.margin},
          {"at_t", d.at_t},        {"samples", d.samples},    {"certified", d.certified}};
}

json to_json(const Quantiles& q) { return {{"min", q.min}, {"p50", q.p50}, {"p95", q.p95}}; }

}  // namespace revlab::report
