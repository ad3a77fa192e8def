#pragma once

// Surrogate training corpus: one record per (scan angle, element count, LIVG
// rank) cell, each produced by a seeded PSO run. Records are JSON Lines.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rcsteer/farfield.hpp"
#include "rcsteer/pso.hpp"
#include "json.hpp"

namespace rcsteer {

inline constexpr std::size_t kDatasetRows = 128;
inline constexpr std::size_t kDatasetMaxElements = 16;
inline constexpr std::size_t kDatasetCols = 2 * kDatasetMaxElements;
inline constexpr std::size_t kDatasetTargetRows = kDatasetMaxElements - 1;

struct DatasetCell {
  double scan_angle_deg = 0.0;
  std::size_t n_elements = 0;
  std::size_t rank = 0;
};

struct DatasetSpec {
  std::vector<double> angles_deg;          // scan sweeps 0 -> angle
  std::vector<std::size_t> elements;       // linear arrays, 1..16
  std::vector<std::size_t> ranks;          // empty = 2..N-1 for each N
  double spacing = 0.5;
  PsoConfig pso;
  AngleGrid grid;
  ObjectiveWeights objective;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::size_t batch_size = 0;  // cells per checkpoint; 0 = worker count
  std::filesystem::path output;

  static DatasetSpec full_grid();
};

DatasetSpec parse_dataset_spec(const nlohmann::json& doc);
DatasetSpec load_dataset_spec(const std::filesystem::path& path);
/// Canonical text of the content-determining fields; its hash keys resume.
std::string dataset_spec_fingerprint(const DatasetSpec& spec);

/// Cells in generation order: angle-major, then N, then rank.
std::vector<DatasetCell> enumerate_cells(const DatasetSpec& spec);

/// Depends only on the base seed and the cell, never on position in the run.
std::uint64_t cell_seed(std::uint64_t base_seed, const DatasetCell& cell);

struct DatasetRecord {
  std::vector<std::vector<double>> input;   // 128 x 32: real parts then imaginary parts of A
  std::vector<std::vector<double>> target;  // 15 x 32: LIVG rows sorted by source index
  std::vector<bool> mask;                   // 15, true-count = rank
  DatasetCell cell;
  std::uint64_t seed = 0;
  std::vector<std::size_t> row_indices;
  double objective = 0.0;
  double max_k = 0.0;
};

DatasetRecord generate_record(const DatasetSpec& spec, const DatasetCell& cell);

nlohmann::json record_json(const DatasetRecord& record);
DatasetRecord parse_record(const nlohmann::json& j);

struct DatasetRunReport {
  std::size_t total = 0;
  std::size_t resumed_from = 0;  // records already present at start
  std::size_t written = 0;
  std::string sha256;            // of the finished file
};

/// Appends records to spec.output in cell order. A checkpoint manifest at
/// `<output>.manifest.json` records the completed count and byte offset
/// after every batch; a rerun with the same spec resumes from it.
/// `max_records`, when set, stops after that many new records (for
/// simulating interruption).
DatasetRunReport generate_dataset(const DatasetSpec& spec, std::optional<std::size_t> max_records = std::nullopt);

std::filesystem::path dataset_manifest_path(const std::filesystem::path& output);

}  // namespace rcsteer
