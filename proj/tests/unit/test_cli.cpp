#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "rcsteer/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "rcsteer_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(RCSTEER_CLI_PATH) + " " + args + " > " + (kWork / "stdout.txt").string() +
                          " 2> " + (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out() { return rcsteer::read_text_file(kWork / "stdout.txt"); }
std::string err() { return rcsteer::read_text_file(kWork / "stderr.txt"); }

fs::path write_scenario(const std::string& name, const json& doc) {
  const auto p = kWork / name;
  rcsteer::write_text_file(p, doc.dump(2));
  return p;
}

json small() {
  return json::parse(R"({
    "name": "cli",
    "geometry": {"layout": "linear", "n_elements": 6},
    "scan": {"m_steps": 12, "theta_start_deg": 0, "theta_end_deg": 30},
    "truncation": {"policy": "fixed_rank", "rank": 3},
    "livg": {"source": "equally_spaced", "rank": 3},
    "pso": {"swarm_size": 4, "iterations": 3},
    "grid": {"step_deg": 0.5}
  })");
}

struct Fresh {
  Fresh() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  Fresh f;
  CHECK(run("") == 2);
  CHECK(run("nonsense") == 2);
  CHECK(run("scenario run") == 2);
  CHECK(run("scenario run x.json --grid-step -1") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("scenario run: success, validation failure, runtime failure") {
  Fresh f;
  const auto good = write_scenario("good.json", small());
  CHECK(run("scenario run " + good.string() + " --out " + (kWork / "bundle").string() + " --seed 4") == 0);
  CHECK(fs::exists(kWork / "bundle" / "manifest.json"));
  CHECK(out().find("pointing MAE") != std::string::npos);

  auto bad = small();
  bad["truncation"]["rank"] = 50;
  CHECK(run("scenario run " + write_scenario("bad.json", bad).string()) == 2);
  CHECK(err().find("truncation.rank") != std::string::npos);

  rcsteer::write_text_file(kWork / "broken.json", "{ not json");
  CHECK(run("scenario run " + (kWork / "broken.json").string()) == 2);

  auto dependent = small();
  dependent["truncation"]["rank"] = 1;
  dependent["livg"] = json{{"source", "explicit"}, {"indices", {0, 5}}};
  CHECK(run("scenario run " + write_scenario("dep.json", dependent).string() + " --out " +
            (kWork / "dep").string()) == 1);
  CHECK(run("scenario run " + (kWork / "missing.json").string()) == 1);
}

TEST_CASE("compress, pso and pattern export") {
  Fresh f;
  const auto s = write_scenario("s.json", small());
  CHECK(run("compress " + s.string() + " --out " + (kWork / "c").string()) == 0);
  const auto comp = json::parse(rcsteer::read_text_file(kWork / "c" / "compression.json"));
  CHECK(comp["rank"] == 3);

  CHECK(run("pso " + s.string() + " --out " + (kWork / "p").string() + " --seed 2 --iterations 2") == 0);
  CHECK(fs::exists(kWork / "p" / "pso_history.csv"));

  CHECK(run("pattern export " + s.string() + " --direction 3 --which ideal --grid-step 1 --out " +
            (kWork / "pat.csv").string()) == 0);
  const auto csv = rcsteer::read_text_file(kWork / "pat.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 182);
  CHECK(run("pattern export " + s.string() + " --direction 99") == 2);

  CHECK(run("pattern export --elements 8 --theta 20 --format json --grid-step 0.5") == 0);
  const auto j = json::parse(out());
  CHECK(j["theta_deg"].size() == 361);
  CHECK(run("pattern export --elements 4 --theta 30 --phase-map") == 0);
  CHECK(out().find("0.5,") == 0);
  CHECK(run("pattern export --format xml") == 2);
}

TEST_CASE("dataset generate") {
  Fresh f;
  const json spec{{"angles_deg", {20}}, {"elements", {4}}, {"pso", {{"swarm_size", 4}, {"iterations", 2}}},
                  {"grid", {{"step_deg", 1.0}}}};
  const auto p = kWork / "spec.json";
  rcsteer::write_text_file(p, spec.dump());
  CHECK(run("dataset generate " + p.string()) == 2);  // no output anywhere
  CHECK(run("dataset generate " + p.string() + " --out " + (kWork / "d.jsonl").string() + " --seed 9") == 0);
  const auto text = rcsteer::read_text_file(kWork / "d.jsonl");
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(out().find("2/2 records") != std::string::npos);
}
