#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revlab/surface.hpp"

namespace revlab {

// Contents of a surface spec file:
//
//   [surface]
//   kind = smoothed_cone     ; catalog name or "tabulated"
//   a = 0.25                 ; family parameters
//   t_max = 1000
//   tol = 1e-12
//   csv = curvature.csv      ; tabulated only, relative to the spec file
//   id = cone_quarter        ; optional label
struct SurfaceSpec {
  std::string source;  // file the spec came from, or "catalog:<name>"
  std::string kind;
  std::string id;
  std::map<std::string, double> params;
  std::optional<double> t_max;
  std::optional<double> tol;
  std::filesystem::path csv;
};

// Throws InputError naming the file and field.
SurfaceSpec read_spec(const std::filesystem::path& path);

// A catalog surface with default parameters.
SurfaceSpec catalog_spec(const std::string& name);

// Two columns (t, G), optional header line, t starting at 0 and increasing.
std::pair<std::vector<double>, std::vector<double>> read_curvature_csv(const std::filesystem::path& path);

SurfaceModel build_surface(const SurfaceSpec& spec);

}  // namespace revlab
