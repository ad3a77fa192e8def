#pragma once

// Scenario documents and the end-to-end pipeline:
// directions -> phases -> ideal weights A -> SVD -> compressed B -> LIVG
// -> K per direction -> ideal vs reconstructed beam metrics.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rcsteer/array_model.hpp"
#include "rcsteer/compression.hpp"
#include "rcsteer/farfield.hpp"
#include "rcsteer/livg.hpp"
#include "rcsteer/pso.hpp"
#include "json.hpp"

namespace rcsteer {

enum class LivgSource { Explicit, EquallySpaced, Pso };

struct LivgSpec {
  LivgSource source = LivgSource::EquallySpaced;
  std::size_t rank = 1;
  std::vector<std::size_t> indices;  // Explicit only
};

struct Scenario {
  std::string name;
  ArrayGeometry geometry;
  std::vector<ScanPlan> scan;  // one or more segments, concatenated
  std::vector<double> amplitude_profile;  // empty = uniform
  TruncationPolicy truncation = FixedRank{1};
  EnergyMeasure energy_measure = EnergyMeasure::SquaredSigma;
  LivgSpec livg;
  PsoConfig pso;
  ObjectiveWeights objective;
  AngleGrid grid;
  std::filesystem::path output_dir;
  bool write_patterns = true;
  std::uint64_t seed = 1;
};

/// Field-by-field validation; ValidationError names the dotted key path.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Sub-object parsers shared with dataset specs. `path` prefixes error fields.
PsoConfig parse_pso_config(const nlohmann::json& obj, const std::string& path);
AngleGrid parse_grid(const nlohmann::json& obj, const std::string& path);

std::string singular_values_csv(const TruncatedSvd& svd, EnergyMeasure measure);

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<double> grid_step_deg;
};
void apply_overrides(Scenario& scenario, const ScenarioOverrides& overrides);

struct SegmentError {
  double theta_mae_deg = 0.0;
  double phi_mae_deg = 0.0;
};

struct DirectionReport {
  Direction direction;
  BeamMetrics ideal;
  BeamMetrics recon;
  double ideal_phi_deg = 0.0;  // planar pointing azimuth
  double recon_phi_deg = 0.0;
  double separation_deg = 0.0;  // |pointing error|, great-circle for planar
  double max_k = 0.0;
  double residual = 0.0;
};

struct PipelineResult {
  Scenario scenario;
  std::vector<Direction> directions;
  PhaseMatrix phases;
  WeightMatrix weights;
  TruncatedSvd svd;
  Compression compressed;
  Livg livg;
  std::vector<KVector> k_table;
  std::vector<DirectionReport> reports;
  std::vector<FarFieldPattern> ideal_patterns;  // only when write_patterns
  std::vector<FarFieldPattern> recon_patterns;
  std::vector<double> livg_row_pointing_deg;  // where each LIVG row steers on its own
  std::vector<SegmentError> segment_errors;
  double pointing_mae_deg = 0.0;
  double energy_fraction = 0.0;
  double reconstruction_error = 0.0;
  double max_k = 0.0;
  SelectionScore score;
  std::optional<PsoResult> pso;
};

/// Runs the full pipeline in memory.
PipelineResult run_pipeline(const Scenario& scenario);

/// Only the compression stage (no LIVG).
struct CompressionReport {
  std::vector<Direction> directions;
  PhaseMatrix phases;
  WeightMatrix weights;
  TruncatedSvd svd;
  Compression compressed;
  double reconstruction_error = 0.0;
};
CompressionReport run_compression(const Scenario& scenario);

nlohmann::json summary_json(const PipelineResult& result);

struct ManifestEntry {
  std::string path;
  std::uintmax_t bytes = 0;
  std::string sha256;
};

/// Writes `files` (relative path -> content) under `dir` plus manifest.json
/// listing each with its hash. Returns the manifest text.
std::string write_bundle(const std::filesystem::path& dir, const std::string& name,
                         const std::vector<std::pair<std::string, std::string>>& files);

/// Serialises every pipeline artifact into a bundle. Returns the manifest text.
std::string write_pipeline_bundle(const PipelineResult& result, const std::filesystem::path& dir);

/// load + run + write; returns the manifest text.
std::string run_scenario(const std::filesystem::path& path, const ScenarioOverrides& overrides = {});

}  // namespace rcsteer
