#include "revlab/spec_file.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "revlab/errors.hpp"

namespace revlab {

namespace {

double parse_number(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError(where + ": '" + text + "' is not a number");
  }
  if (used != text.size() || !std::isfinite(v)) throw InputError(where + ": '" + text + "' is not a finite number");
  return v;
}

}  // namespace

SurfaceSpec read_spec(const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw InputError(path.string() + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  const auto section = tree.get_child_optional("surface");
  if (!section) throw InputError(path.string() + ": missing [surface] section");

  SurfaceSpec spec;
  spec.source = path.string();
  for (const auto& [key, node] : *section) {
    const std::string value = node.get_value<std::string>();
    const std::string where = path.string() + ": [surface] " + key;
    if (key == "kind") {
      spec.kind = value;
    } else if (key == "id") {
      spec.id = value;
    } else if (key == "csv") {
      spec.csv = path.parent_path() / value;
    } else if (key == "t_max") {
      spec.t_max = parse_number(value, where);
      if (!(*spec.t_max > 0.0)) throw InputError(where + ": must be positive");
    } else if (key == "tol") {
      spec.tol = parse_number(value, where);
      if (!(*spec.tol > 0.0)) throw InputError(where + ": must be positive");
    } else {
      spec.params[key] = parse_number(value, where);
    }
  }
  if (spec.kind.empty()) throw InputError(path.string() + ": [surface] kind is missing");
  if (spec.kind == "tabulated" && spec.csv.empty()) throw InputError(path.string() + ": [surface] csv is missing");
  return spec;
}

SurfaceSpec catalog_spec(const std::string& name) {
  SurfaceSpec spec;
  spec.source = "catalog:" + name;
  spec.kind = name;
  return spec;
}

std::pair<std::vector<double>, std::vector<double>> read_curvature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open curvature table");
  std::vector<double> t, g;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) throw InputError(path.string() + ": row " + std::to_string(row) + " needs two columns");
    const std::string where = path.string() + ": row " + std::to_string(row);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    a = trim(a);
    b = trim(b);
    if (t.empty() && row == 1 && !a.empty() && !(std::isdigit(static_cast<unsigned char>(a[0])) || a[0] == '-' || a[0] == '.'))
      continue;  // header
    t.push_back(parse_number(a, where + " column t"));
    g.push_back(parse_number(b, where + " column G"));
    if (t.size() > 1 && !(t.back() > t[t.size() - 2])) throw InputError(where + ": t must be strictly increasing");
  }
  if (t.size() < 2) throw InputError(path.string() + ": curvature table needs at least two rows");
  if (t.front() != 0.0) throw InputError(path.string() + ": curvature table must start at t = 0");
  return {std::move(t), std::move(g)};
}

SurfaceModel build_surface(const SurfaceSpec& spec) {
  if (spec.kind == "tabulated") {
    auto [t, g] = read_curvature_csv(spec.csv);
    const double t_max = spec.t_max.value_or(t.back());
    if (t_max > t.back()) throw InputError(spec.source + ": [surface] t_max exceeds the tabulated range");
    return SurfaceModel(RadialCurvature::tabulated(std::move(t), std::move(g)), t_max, spec.tol.value_or(kDefaultTol),
                        spec.id.empty() ? "tabulated" : spec.id);
  }
  static const std::map<std::string, std::vector<std::string>> known = {
      {"plane", {}},
      {"hyperbolic", {}},
      {"paraboloid", {}},
      {"constant", {"k"}},
      {"smoothed_cone", {"a"}},
      {"bump", {"amplitude", "center", "width"}},
      {"spike", {"a", "depth0", "growth", "first", "spacing", "mass0"}},
  };
  const auto it = known.find(spec.kind);
  if (it == known.end()) throw InputError(spec.source + ": [surface] kind '" + spec.kind + "' is not a catalog surface");
  for (const auto& [key, value] : spec.params)
    if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
      throw InputError(spec.source + ": [surface] " + key + " is not a parameter of " + spec.kind);
  if (spec.kind == "constant" && !spec.t_max) throw InputError(spec.source + ": [surface] t_max is required for constant");
  SurfaceModel S = catalog(spec.kind, spec.params, spec.t_max, spec.tol);
  if (spec.id.empty()) return S;
  return SurfaceModel(S.curvature(), S.t_max(), S.tol(), spec.id);
}

}  // namespace revlab
