#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slitsim/runner.hpp"
#include "slitsim/scenario.hpp"

using namespace slitsim;
namespace fs = std::filesystem;

namespace {

std::string classical_config(const std::string& out_dir) {
  std::ostringstream s;
  s << "beam.mass_amu = 840\n"
       "beam.v_mean_mps = 200\n"
       "beam.v_sigma_mps = 0\n"
       "beam.source_width_m = 1e-6\n"
       "beam.divergence_rad = 6e-6\n"
       "geometry.z_detector_m = 1.0\n"
       "station.1.z_m = 0.5\n"
       "station.1.period_m = 1e-6\n"
       "station.1.slit_width_m = 7.5e-7\n"
       "station.1.depth_m = 5e-7\n"
       "station.1.n_slits = 3\n"
       "station.1.c3_Jm3 = 0\n"
       "model = classical\n"
       "sweep.parameter = slit_width_m\n"
       "sweep.values = 4e-7, 7e-7\n"
       "monte_carlo.n_rays = 50000\n"
       "monte_carlo.seed = 4242\n"
       "detector.x_min_m = -8e-6\n"
       "detector.x_max_m = 8e-6\n"
       "detector.n_bins = 400\n"
       "analysis.reference_period_m = 2e-6\n"
    << "output.dir = " << out_dir << "\n";
  return s.str();
}

std::string farfield_compare_config(const std::string& out_dir) {
  std::ostringstream s;
  s << "beam.mass_amu = 1\n"
       "beam.v_mean_mps = 1.5962\n"  // de Broglie wavelength = period / 4
       "beam.v_sigma_mps = 0\n"
       "beam.source_width_m = 1e-6\n"
       "beam.divergence_rad = 5e-6\n"
       "geometry.z_detector_m = 1.0\n"
       "station.1.z_m = 0.5\n"
       "station.1.period_m = 1e-6\n"
       "station.1.slit_width_m = 5e-8\n"
       "station.1.depth_m = 0\n"
       "station.1.n_slits = 16\n"
       "station.1.c3_Jm3 = 0\n"
       "model = both\n"
       "sweep.parameter = v_mean_mps\n"
       "sweep.values = 1.5962, 3.1924\n"
       "monte_carlo.n_rays = 20000\n"
       "monte_carlo.seed = 7\n"
       "wave.far_field = true\n"
       "wave.far_field_half_range = 1.0025\n"
       "wave.far_field_bins = 401\n"
       "detector.x_min_m = -8e-6\n"
       "detector.x_max_m = 8e-6\n"
       "detector.n_bins = 400\n"
       "analysis.reference_period_m = auto\n"
    << "output.dir = " << out_dir << "\n";
  return s.str();
}

Scenario scenario_from_string(const std::string& text) {
  std::istringstream in(text);
  return build_scenario(FlatConfig::parse_stream(in, "<test>"));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "slitsim_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("scenario files parse into validated scenarios", "[scenario]") {
  const auto s = scenario_from_string(classical_config("/tmp/unused"));
  CHECK(s.model == ModelChoice::classical);
  CHECK(s.sweep_param == SweepParam::slit_width);
  CHECK(s.sweep_values == std::vector<double>{4e-7, 7e-7});
  CHECK(s.n_rays == 50000);
  CHECK(s.seed == 4242);
  CHECK(s.reference_period.has_value());
  CHECK_NOTHROW(validate_scenario(s));
}

TEST_CASE("config diagnostics carry file and line information", "[scenario]") {
  auto expect_config_error = [](const std::string& text,
                                const std::string& needle) {
    std::istringstream in(text);
    try {
      build_scenario(FlatConfig::parse_stream(in, "<test>"));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_config_error("beam.mass_amu = heavy\n", ":1");
  expect_config_error("beam.mass_amu = 840\nbeam.mass_amu = 720\n", ":2");
  expect_config_error("no equals sign here\n", ":1");

  // unknown keys are rejected with their location
  std::string cfg = classical_config("/tmp/unused");
  cfg += "beam.typo_key = 3\n";
  expect_config_error(cfg, "typo_key");

  // missing required keys are named
  expect_config_error("model = classical\n", "beam.mass_amu");
}

TEST_CASE("invalid sweep values are rejected through the type invariants",
          "[scenario]") {
  std::string cfg = classical_config("/tmp/unused");
  const auto pos = cfg.find("sweep.values = 4e-7, 7e-7");
  REQUIRE(pos != std::string::npos);
  cfg.replace(pos, std::string("sweep.values = 4e-7, 7e-7").size(),
              "sweep.values = 4e-7, 2e-6");  // slit width above the period
  const auto s = scenario_from_string(cfg);
  CHECK_THROWS_AS(validate_scenario(s), ConfigError);
}

TEST_CASE("run_scenario writes profiles, visibility tables, and a manifest",
          "[scenario]") {
  const fs::path dir = fresh_dir("run_basic");
  const auto s = scenario_from_string(classical_config(dir.string()));
  const auto summary = run_scenario(s, {.threads = 2});

  CHECK(fs::exists(dir / "profile_classical_s0.csv"));
  CHECK(fs::exists(dir / "profile_classical_s1.csv"));
  CHECK(fs::exists(dir / "visibility_classical.csv"));
  CHECK(fs::exists(dir / "run_manifest.json"));
  CHECK(summary.files.size() == 4);

  const auto vis = read_csv(dir / "visibility_classical.csv");
  REQUIRE(vis.size() == 3);
  CHECK(vis[0] == std::vector<std::string>{"sweep_value", "visibility_fourier",
                                           "visibility_minmax",
                                           "fringe_period_m", "peak_count"});
  // narrow slits modulate deeper than wide ones
  const double v_narrow = std::stod(vis[1][1]);
  const double v_wide = std::stod(vis[2][1]);
  CHECK(v_narrow > v_wide + 0.05);

  const auto profile = read_csv(dir / "profile_classical_s0.csv");
  CHECK(profile[0] == std::vector<std::string>{"x_m", "intensity",
                                               "normalized_intensity"});
  CHECK(profile.size() == 401);
}

TEST_CASE("identical configurations reproduce byte-identical outputs",
          "[scenario]") {
  const fs::path dir1 = fresh_dir("det_a");
  const fs::path dir2 = fresh_dir("det_b");
  auto s1 = scenario_from_string(classical_config(dir1.string()));
  auto s2 = scenario_from_string(classical_config(dir2.string()));
  run_scenario(s1, {.threads = 1});
  run_scenario(s2, {.threads = 8});
  for (const char* name :
       {"profile_classical_s0.csv", "profile_classical_s1.csv",
        "visibility_classical.csv"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
  }
}

TEST_CASE("the manifest reproduces the run byte for byte", "[scenario]") {
  const fs::path dir1 = fresh_dir("mani_a");
  const auto s1 = scenario_from_string(classical_config(dir1.string()));
  run_scenario(s1, {.threads = 2});

  // rebuild a config purely from the manifest's resolved key-value map
  const auto manifest = nlohmann::json::parse(slurp(dir1 / "run_manifest.json"));
  const fs::path dir2 = fresh_dir("mani_b");
  std::ostringstream rebuilt;
  for (const auto& [key, value] :
       manifest.at("resolved_config").get<std::map<std::string, std::string>>()) {
    if (key == "output.dir")
      rebuilt << "output.dir = " << dir2.string() << "\n";
    else
      rebuilt << key << " = " << value << "\n";
  }
  const auto s2 = scenario_from_string(rebuilt.str());
  run_scenario(s2, {.threads = 1});

  for (const char* name :
       {"profile_classical_s0.csv", "profile_classical_s1.csv",
        "visibility_classical.csv"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
  }
}

TEST_CASE("compare requires model both and a velocity sweep", "[scenario]") {
  const auto s = scenario_from_string(classical_config("/tmp/unused"));
  CHECK_THROWS_AS(compare_models(s, {}), ConfigError);
}

TEST_CASE("compare emits side-by-side tables and extremum positions",
          "[scenario]") {
  const fs::path dir = fresh_dir("compare_ff");
  const auto s = scenario_from_string(farfield_compare_config(dir.string()));
  compare_models(s, {.threads = 2});

  const auto cmp = read_csv(dir / "compare.csv");
  REQUIRE(cmp.size() == 3);
  CHECK(cmp[0] == std::vector<std::string>{
                      "sweep_value", "visibility_classical",
                      "visibility_quantum", "peaks_classical",
                      "peaks_quantum"});
  // wavelength period/4 -> orders |n| <= 4; halved wavelength -> |n| <= 8
  CHECK(cmp[1][4] == "9");
  CHECK(cmp[2][4] == "17");

  // doubling the velocity halves every principal-maximum angle
  auto maxima = [&](const char* file) {
    std::vector<double> xs;
    for (const auto& row : read_csv(dir / file)) {
      if (row.size() == 3 && row[0] == "max") xs.push_back(std::stod(row[1]));
    }
    return xs;
  };
  const auto slow = maxima("extrema_quantum_s0.csv");
  const auto fast = maxima("extrema_quantum_s1.csv");
  REQUIRE(slow.size() == 9);
  REQUIRE(fast.size() == 17);
  const double bin = 1.0025 * 2.0 / 401.0;
  for (double s_slow : slow) {
    bool found = false;
    for (double s_fast : fast)
      if (std::abs(s_fast - 0.5 * s_slow) <= bin) found = true;
    CHECK(found);
  }
}

TEST_CASE("classical visibility is velocity-invariant while quantum varies",
          "[scenario]") {
  const fs::path dir = fresh_dir("cmp_fresnel");
  std::ostringstream s;
  s << "beam.mass_amu = 840\n"
       "beam.v_mean_mps = 1200\n"
       "beam.v_sigma_mps = 0\n"
       "beam.source_width_m = 1e-6\n"
       "beam.divergence_rad = 6e-6\n"
       "geometry.z_detector_m = 0.5\n"
       "station.1.z_m = 0\n"
       "station.1.period_m = 1e-6\n"
       "station.1.slit_width_m = 2.5e-7\n"
       "station.1.depth_m = 0\n"
       "station.1.n_slits = 2\n"
       "station.1.c3_Jm3 = 0\n"
       "model = both\n"
       "sweep.parameter = v_mean_mps\n"
       "sweep.values = 600, 1200, 2400\n"
       "monte_carlo.n_rays = 30000\n"
       "monte_carlo.seed = 11\n"
       "wave.grid_samples = 131072\n"
       "wave.grid_width_m = 2.048e-3\n"
       "wave.n_velocity_bins = 1\n"
       "detector.x_min_m = -8e-6\n"
       "detector.x_max_m = 8e-6\n"
       "detector.n_bins = 400\n"
       "analysis.reference_period_m = 1.979e-7\n"
    << "output.dir = " << dir.string() << "\n";
  const auto scenario = scenario_from_string(s.str());
  compare_models(scenario, {.threads = 4});

  const auto cmp = read_csv(dir / "compare.csv");
  REQUIRE(cmp.size() == 4);
  // classical: straight rays, no velocity term anywhere at c3 = 0
  CHECK(cmp[1][1] == cmp[2][1]);
  CHECK(cmp[2][1] == cmp[3][1]);
  // quantum: the de Broglie wavelength moves the fringes off the reference
  const double q600 = std::stod(cmp[1][2]);
  const double q1200 = std::stod(cmp[2][2]);
  const double q2400 = std::stod(cmp[3][2]);
  CHECK(q1200 > q600 + 0.1);
  CHECK(q1200 > q2400 + 0.1);
}
