// rcsteer command line front end.
// Exit codes: 0 success, 2 validation error, 1 runtime error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rcsteer/dataset.hpp"
#include "rcsteer/error.hpp"
#include "rcsteer/io.hpp"
#include "rcsteer/kernels.hpp"
#include "rcsteer/scenario.hpp"

namespace fs = std::filesystem;
using namespace rcsteer;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> grid_step;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (overrides the file)");
    cmd->add_option("--out", out, "Output location (overrides the file)");
    cmd->add_option("--grid-step", grid_step, "Far-field grid step in degrees")->check(CLI::PositiveNumber);
  }

  ScenarioOverrides overrides() const {
    ScenarioOverrides o;
    o.seed = seed;
    if (out) o.output_dir = fs::path(*out);
    o.grid_step_deg = grid_step;
    return o;
  }
};

Scenario load_with(const std::string& file, const Common& common) {
  auto sc = load_scenario(file);
  apply_overrides(sc, common.overrides());
  return sc;
}

void print_summary(const PipelineResult& r, const fs::path& dir) {
  std::cout << "scenario " << r.scenario.name << ": pointing MAE " << format_double(r.pointing_mae_deg)
            << " deg, energy " << format_double(r.energy_fraction) << ", max|K| " << format_double(r.max_k)
            << ", objective " << format_double(r.score.objective) << "\n"
            << "bundle written to " << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconfigurable beam steering: weight compression, LIVG selection and far-field evaluation"};
  app.require_subcommand(1);

  // scenario run <file>
  auto* scenario_cmd = app.add_subcommand("scenario", "Scenario pipeline");
  scenario_cmd->require_subcommand(1);
  auto* scenario_run = scenario_cmd->add_subcommand("run", "Run a scenario file end to end and write its bundle");
  std::string scenario_file;
  Common scenario_common;
  scenario_run->add_option("file", scenario_file, "Scenario JSON")->required();
  scenario_common.attach(scenario_run);

  // dataset generate <spec>
  auto* dataset_cmd = app.add_subcommand("dataset", "Surrogate training data");
  dataset_cmd->require_subcommand(1);
  auto* dataset_gen = dataset_cmd->add_subcommand("generate", "Generate (or resume) a JSONL dataset");
  std::string dataset_file;
  Common dataset_common;
  std::optional<std::size_t> dataset_threads;
  std::optional<std::size_t> dataset_limit;
  dataset_gen->add_option("spec", dataset_file, "Dataset spec JSON")->required();
  dataset_common.attach(dataset_gen);
  dataset_gen->add_option("--threads", dataset_threads, "Worker threads (0 = all cores)");
  dataset_gen->add_option("--max-records", dataset_limit, "Stop after this many new records");

  // pattern export
  auto* pattern_cmd = app.add_subcommand("pattern", "Far-field patterns");
  pattern_cmd->require_subcommand(1);
  auto* pattern_export = pattern_cmd->add_subcommand(
      "export", "Export one direction's pattern from a scenario, or a uniformly steered array without one");
  std::string pattern_scenario;
  Common pattern_common;
  std::size_t pattern_direction = 0;
  std::string pattern_which = "recon";
  std::string pattern_format = "csv";
  bool pattern_phase_map = false;
  std::size_t pattern_elements = 16;
  double pattern_theta = 0.0;
  double pattern_spacing = 0.5;
  pattern_export->add_option("scenario", pattern_scenario, "Scenario JSON (optional)");
  pattern_common.attach(pattern_export);
  pattern_export->add_option("--direction", pattern_direction, "Scan step index m");
  pattern_export->add_option("--which", pattern_which, "ideal | recon")->check(CLI::IsMember({"ideal", "recon"}));
  pattern_export->add_option("--format", pattern_format, "csv | json");
  pattern_export->add_flag("--phase-map", pattern_phase_map, "Export the grayscale phase map instead");
  pattern_export->add_option("--elements", pattern_elements, "Element count (no scenario)")->check(CLI::PositiveNumber);
  pattern_export->add_option("--theta", pattern_theta, "Steering angle in degrees (no scenario)")
      ->check(CLI::Range(-90.0, 90.0));
  pattern_export->add_option("--spacing", pattern_spacing, "Element spacing in wavelengths (no scenario)")
      ->check(CLI::PositiveNumber);

  // compress <file>
  auto* compress_cmd = app.add_subcommand("compress", "SVD-compress a scenario's weight matrix");
  std::string compress_file;
  Common compress_common;
  compress_cmd->add_option("file", compress_file, "Scenario JSON")->required();
  compress_common.attach(compress_cmd);

  // pso <file>
  auto* pso_cmd = app.add_subcommand("pso", "Optimize a scenario's LIVG by particle swarm");
  std::string pso_file;
  Common pso_common;
  std::optional<std::size_t> pso_rank;
  std::optional<std::size_t> pso_iterations;
  std::optional<std::size_t> pso_swarm;
  pso_cmd->add_option("file", pso_file, "Scenario JSON")->required();
  pso_common.attach(pso_cmd);
  pso_cmd->add_option("--rank", pso_rank, "LIVG size (default: the scenario's)")->check(CLI::PositiveNumber);
  pso_cmd->add_option("--iterations", pso_iterations, "Swarm iterations")->check(CLI::PositiveNumber);
  pso_cmd->add_option("--swarm", pso_swarm, "Swarm size")->check(CLI::Range(2, 1 << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (scenario_run->parsed()) {
      const auto sc = load_with(scenario_file, scenario_common);
      const auto result = run_pipeline(sc);
      write_pipeline_bundle(result, sc.output_dir);
      print_summary(result, sc.output_dir);
    } else if (dataset_gen->parsed()) {
      auto spec = load_dataset_spec(dataset_file);
      if (dataset_common.seed) spec.seed = *dataset_common.seed;
      if (dataset_common.out) spec.output = *dataset_common.out;
      if (dataset_common.grid_step) spec.grid.step_deg = *dataset_common.grid_step;
      if (dataset_threads) spec.threads = *dataset_threads;
      if (spec.output.empty()) throw ValidationError("output", "is required (set it in the spec or pass --out)");
      const auto report = generate_dataset(spec, dataset_limit);
      std::cout << "dataset " << spec.output.string() << ": " << report.resumed_from + report.written << "/"
                << report.total << " records (" << report.resumed_from << " resumed, " << report.written
                << " new)\n";
      if (!report.sha256.empty()) std::cout << "sha256 " << report.sha256 << "\n";
    } else if (pattern_export->parsed()) {
      const auto format = parse_pattern_format(pattern_format);
      std::string text;
      if (!pattern_scenario.empty()) {
        auto sc = load_with(pattern_scenario, pattern_common);
        if (pattern_phase_map) {
          const auto comp = run_compression(sc);
          text = real_matrix_csv(phase_map(comp.phases), "");
        } else {
          sc.write_patterns = true;
          const auto result = run_pipeline(sc);
          if (pattern_direction >= result.directions.size())
            throw ValidationError("--direction", "must be < M = " + std::to_string(result.directions.size()));
          const auto& set = pattern_which == "ideal" ? result.ideal_patterns : result.recon_patterns;
          text = pattern_text(set[pattern_direction], format);
        }
      } else {
        const auto geometry = ArrayGeometry::linear(pattern_elements, pattern_spacing);
        if (pattern_phase_map) {
          const Direction dir{pattern_theta, 0.0};
          text = real_matrix_csv(phase_map(build_phase_matrix(geometry, std::span<const Direction>(&dir, 1))), "");
        } else {
          AngleGrid grid;
          if (pattern_common.grid_step) grid.step_deg = *pattern_common.grid_step;
          const SteeringTable table(geometry, grid.samples());
          const CVector w = steering_vector(pattern_theta, geometry).conjugate();
          text = pattern_text(table.pattern(std::span<const Complex>(w.data(), static_cast<std::size_t>(w.size()))),
                              format);
        }
      }
      if (pattern_common.out) {
        write_text_file(*pattern_common.out, text);
      } else {
        std::cout << text;
      }
    } else if (compress_cmd->parsed()) {
      const auto sc = load_with(compress_file, compress_common);
      const auto comp = run_compression(sc);
      const double energy = energy_fraction(comp.svd, comp.compressed.rank, sc.energy_measure);
      nlohmann::json summary{{"name", sc.name},
                             {"rank", comp.compressed.rank},
                             {"retained_rank", comp.svd.retained_rank},
                             {"energy_fraction", energy},
                             {"reconstruction_error", comp.reconstruction_error}};
      write_bundle(sc.output_dir, sc.name,
                   {{"compression.json", summary.dump(2) + "\n"},
                    {"singular_values.csv", singular_values_csv(comp.svd, sc.energy_measure)},
                    {"weights.json", complex_matrix_json(comp.weights.values).dump() + "\n"},
                    {"compressed.json", complex_matrix_json(comp.compressed.matrix).dump() + "\n"}});
      std::cout << "compressed " << sc.name << " to rank " << comp.compressed.rank << ": energy "
                << format_double(energy) << ", error " << format_double(comp.reconstruction_error) << "\n";
    } else if (pso_cmd->parsed()) {
      auto sc = load_with(pso_file, pso_common);
      sc.livg.source = LivgSource::Pso;
      sc.livg.indices.clear();
      if (pso_rank) sc.livg.rank = *pso_rank;
      if (pso_iterations) sc.pso.iterations = *pso_iterations;
      if (pso_swarm) sc.pso.swarm_size = *pso_swarm;
      const auto result = run_pipeline(sc);
      write_pipeline_bundle(result, sc.output_dir);
      print_summary(result, sc.output_dir);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
