#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kOut = fs::temp_directory_path() / "revlab_cli_tests";

int revlab(const std::string& args) {
  const std::string cmd = std::string(REVLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json load(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string spec(const char* name) { return std::string(REVLAB_SPECS_DIR) + "/" + name; }

}  // namespace

TEST_CASE("input errors exit 3") {
  CHECK(revlab("surface --surface " + spec("sphere.ini") + " --out " + (kOut / "s").string()) == 3);
  CHECK(revlab("surface --surface nowhere.ini") == 3);
  CHECK(revlab("surface --surface plane --tol bogus=1") == 3);
  CHECK(revlab("surface --surface plane --samples fan=-4") == 3);
  CHECK(revlab("lemmas") == 3);
  CHECK(revlab("frobnicate") == 3);
}

TEST_CASE("a failed gate exits 2") {
  CHECK(revlab("lemmas --surface plane --out " + (kOut / "g").string()) == 2);
  CHECK(revlab("verify-tct --surface hyperbolic --surface plane --out " + (kOut / "g").string()) == 2);
}

TEST_CASE("surface report") {
  const fs::path out = kOut / "surface";
  REQUIRE(revlab("surface --surface " + spec("paraboloid.ini") + " --out " + out.string()) == 0);
  const auto j = load(out / "surface_paraboloid.json");
  CHECK(j["checks"]["identity_ok"] == true);
  CHECK(j["config"]["surfaces"][0]["kind"] == "paraboloid");
  CHECK(fs::exists(out / "warp_paraboloid.csv"));
}

TEST_CASE("distance report shape") {
  const fs::path out = kOut / "distance";
  REQUIRE(revlab("distance --surface plane --from 1,0 --to 1,1.5707963267948966 --out " + out.string()) == 0);
  const auto j = load(out / "distance.json");
  CHECK(j["d"].get<double>() == doctest::Approx(std::sqrt(2.0)));
  REQUIRE(j["minimizers"].size() == 1);
  for (const char* key : {"phi0", "nu", "length"}) CHECK(j["minimizers"][0].contains(key));
}

TEST_CASE("lemmas on the cone") {
  const fs::path out = kOut / "lemmas";
  REQUIRE(revlab("lemmas --surface " + spec("smoothed_cone.ini") + " --out " + out.string()) == 0);
  const auto j = load(out / "lemmas.json");
  CHECK(j["constants"]["lambda0"].get<double>() == doctest::Approx(0.5235987756).epsilon(1e-10));
  for (const char* key : {"surface", "constants", "series", "violations"}) CHECK(j.contains(key));
  CHECK(j["violations"].empty());
}

TEST_CASE("comparison fuzz with the documented seed") {
  const fs::path out = kOut / "tct";
  REQUIRE(revlab("verify-tct --surface plane --surface hyperbolic --samples triangles=200 --seed 7 --out " +
                 out.string()) == 0);
  const auto j = load(out / "tct.json");
  CHECK(j["n"] == 200);
  CHECK(j["violations"] == 0);
  for (const char* key : {"min", "p50", "p95"}) CHECK(j["margins"].contains(key));
  CHECK(j["config"]["seed"] == 7);
}

TEST_CASE("cut locus report and SVG legend") {
  const fs::path out = kOut / "cut";
  REQUIRE(revlab("cutlocus --surface paraboloid --t0 2 --samples fan=128 --out " + out.string()) == 0);
  const auto j = load(out / "cutlocus_paraboloid.json");
  CHECK(j["structure"] == "opposite_meridian_subray");
  std::ifstream svg(out / "cutlocus_paraboloid.svg");
  const std::string text{std::istreambuf_iterator<char>(svg), {}};
  CHECK(text.find("polar coordinates") != std::string::npos);
}
