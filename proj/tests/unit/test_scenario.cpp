#include <filesystem>

#include "doctest.h"
#include "rcsteer/error.hpp"
#include "rcsteer/io.hpp"
#include "rcsteer/scenario.hpp"

using namespace rcsteer;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json small_linear() {
  return json::parse(R"({
    "name": "small",
    "geometry": {"layout": "linear", "n_elements": 8},
    "scan": {"m_steps": 24, "theta_start_deg": 0, "theta_end_deg": 30},
    "truncation": {"policy": "fixed_rank", "rank": 3},
    "livg": {"source": "equally_spaced", "rank": 3},
    "grid": {"step_deg": 0.1},
    "seed": 3
  })");
}

std::string field_of(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "(accepted)";
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rcsteer_scenario_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("a minimal scenario parses with defaults") {
  const auto sc = parse_scenario(small_linear());
  CHECK(sc.name == "small");
  CHECK(sc.geometry.n_elements == 8);
  CHECK(sc.geometry.spacing == 0.5);
  CHECK(sc.scan.size() == 1);
  CHECK(std::get<FixedRank>(sc.truncation).rank == 3);
  CHECK(sc.energy_measure == EnergyMeasure::SquaredSigma);
  CHECK(sc.grid.step_deg == 0.1);
  CHECK(sc.grid.start_deg == -90.0);
  CHECK(sc.seed == 3);
  CHECK(sc.pso.seed == 3);
  CHECK(sc.output_dir == fs::path("out") / "small");
}

TEST_CASE("every validation failure names the offending key") {
  struct Case {
    const char* pointer;
    json value;
    const char* field;
  };
  const std::vector<Case> cases{
      {"/geometry/n_elements", 0, "geometry.n_elements"},
      {"/geometry/spacing", -1.0, "geometry.spacing"},
      {"/geometry/layout", "ring", "geometry.layout"},
      {"/scan/m_steps", 0, "scan.m_steps"},
      {"/scan/theta_end_deg", -5.0, "scan.theta_end_deg"},
      {"/scan/theta_start_deg", -95.0, "scan.theta_start_deg"},
      {"/truncation/policy", "magic", "truncation.policy"},
      {"/truncation/rank", 9, "truncation.rank"},
      {"/truncation/energy_measure", "cubes", "truncation.energy_measure"},
      {"/livg/rank", 9, "livg.rank"},
      {"/livg/source", "oracle", "livg.source"},
      {"/grid/step_deg", 0.0, "grid.step_deg"},
      {"/seed", -1, "seed"},
      {"/name", "", "name"},
      {"/colour", "blue", "colour"},
      {"/pso", json{{"swarm_size", 1}}, "pso.swarm_size"},
      {"/pso", json{{"inertia", 2.0}}, "pso.inertia"},
      {"/pso", json{{"k_bound", 0.0}}, "pso.k_bound"},
      {"/amplitude_profile", json::array({1, 1}), "amplitude_profile"},
  };
  for (const auto& c : cases) {
    auto doc = small_linear();
    doc[json::json_pointer(c.pointer)] = c.value;
    CAPTURE(c.pointer);
    CHECK(field_of(doc) == c.field);
  }
  auto doc = small_linear();
  doc["livg"] = json{{"source", "explicit"}, {"indices", {0, 30}}};
  CHECK(field_of(doc) == "livg.indices[1]");
  doc["livg"] = json{{"source", "explicit"}, {"indices", {4, 4}}};
  CHECK(field_of(doc) == "livg.indices[1]");
  doc.erase("geometry");
  CHECK(field_of(doc) == "geometry");

  try {
    auto bad = small_linear();
    bad["truncation"]["rank"] = 9;
    parse_scenario(bad);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("<=") != std::string::npos);
  }
}

TEST_CASE("overrides") {
  auto sc = parse_scenario(small_linear());
  apply_overrides(sc, ScenarioOverrides{11, fs::path("elsewhere"), 0.25});
  CHECK(sc.seed == 11);
  CHECK(sc.pso.seed == 11);
  CHECK(sc.output_dir == fs::path("elsewhere"));
  CHECK(sc.grid.step_deg == 0.25);
  CHECK_THROWS_AS(apply_overrides(sc, ScenarioOverrides{std::nullopt, std::nullopt, -1.0}), ValidationError);
}

TEST_CASE("a single-direction scenario has zero pointing error by construction") {
  auto doc = small_linear();
  doc["scan"] = json{{"m_steps", 1}, {"theta_start_deg", 20}, {"theta_end_deg", 20}};
  doc["truncation"]["rank"] = 1;
  doc["livg"]["rank"] = 1;
  const auto r = run_pipeline(parse_scenario(doc));
  CHECK(r.directions.size() == 1);
  CHECK(r.pointing_mae_deg == 0.0);
  CHECK(r.reports[0].residual < 1e-12);
}

TEST_CASE("exact basis: full rank truncation and a full-rank LIVG reproduce every direction") {
  auto doc = small_linear();
  doc["truncation"]["rank"] = 8;
  doc["livg"]["rank"] = 8;
  const auto r = run_pipeline(parse_scenario(doc));
  CHECK(r.pointing_mae_deg <= 0.1);
  for (const auto& rep : r.reports) CHECK(rep.residual < 1e-9 * std::sqrt(8.0));
  CHECK(r.energy_fraction == 1.0);
}

TEST_CASE("explicit LIVG rows and dependent selections") {
  auto doc = small_linear();
  doc["livg"] = json{{"source", "explicit"}, {"indices", {2, 12, 20}}};
  const auto r = run_pipeline(parse_scenario(doc));
  CHECK(r.livg.row_indices == std::vector<std::size_t>{2, 12, 20});
  CHECK(r.k_table.size() == 24);
  CHECK(r.livg_row_pointing_deg.size() == 3);

  doc["truncation"]["rank"] = 1;
  doc["livg"] = json{{"source", "explicit"}, {"indices", {2, 12}}};
  CHECK_THROWS_AS(run_pipeline(parse_scenario(doc)), DependenceError);
}

TEST_CASE("bundle contents and byte-identical reruns") {
  auto doc = small_linear();
  doc["livg"] = json{{"source", "pso"}, {"rank", 3}};
  doc["pso"] = json{{"swarm_size", 6}, {"iterations", 4}};
  const auto dir_a = scratch("a"), dir_b = scratch("b");
  const auto sc = parse_scenario(doc);
  const auto first = write_pipeline_bundle(run_pipeline(sc), dir_a);
  auto threaded = sc;
  threaded.pso.threads = 3;
  const auto second = write_pipeline_bundle(run_pipeline(threaded), dir_b);
  CHECK(first == second);

  const auto manifest = json::parse(first);
  std::vector<std::string> names;
  for (const auto& f : manifest["files"]) {
    names.push_back(f["path"]);
    CHECK(f["sha256"].get<std::string>().size() == 64);
    CHECK(fs::file_size(dir_a / f["path"].get<std::string>()) == f["bytes"].get<std::uintmax_t>());
  }
  CHECK(std::is_sorted(names.begin(), names.end()));
  for (const char* required : {"summary.json", "phases.csv", "phase_map.csv", "weights.json", "compressed.json",
                               "singular_values.csv", "livg.json", "k_table.json", "metrics.csv",
                               "patterns_ideal.csv", "patterns_recon.csv", "pso_history.csv"})
    CHECK(std::find(names.begin(), names.end(), required) != names.end());

  const auto summary = json::parse(read_text_file(dir_a / "summary.json"));
  CHECK(summary["livg_rank"] == 3);
  CHECK(summary["pso"]["iterations"] == 4);
  const auto history = read_text_file(dir_a / "pso_history.csv");
  CHECK(std::count(history.begin(), history.end(), '\n') == 6);  // header + initial + 4 steps
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("planar scenario with two sweep segments") {
  const auto doc = json::parse(R"({
    "name": "planar",
    "geometry": {"layout": "planar", "n_side": 3},
    "scan": [
      {"m_steps": 10, "theta_start_deg": 0, "theta_end_deg": 30},
      {"m_steps": 10, "theta_start_deg": 30, "theta_end_deg": 30, "phi_start_deg": 0, "phi_end_deg": 30}
    ],
    "truncation": {"policy": "fixed_rank", "rank": 4},
    "livg": {"source": "equally_spaced", "rank": 4},
    "grid": {"step_deg": 0.1},
    "output": {"write_patterns": false}
  })");
  const auto r = run_pipeline(parse_scenario(doc));
  REQUIRE(r.segment_errors.size() == 2);
  CHECK(r.segment_errors[0].theta_mae_deg < 1.0);
  CHECK(r.segment_errors[1].phi_mae_deg < 2.0);
  CHECK(r.ideal_patterns.empty());
  for (std::size_t m = 10; m < 20; ++m) CHECK(std::abs(r.reports[m].ideal_phi_deg - r.directions[m].phi_deg) < 0.2);

  auto wrong = doc;
  wrong["geometry"]["n_elements"] = 10;
  CHECK(field_of(wrong) == "geometry.n_elements");
}

TEST_CASE("bundled scenario files parse") {
  for (const char* name : {"linear128_equally_spaced.json", "linear16_pso.json", "planar4x4.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_scenario(fs::path(RCSTEER_SOURCE_DIR) / "scenarios" / name));
  }
}
