#pragma once

// Plain-text serialisation of matrices, patterns and K tables.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rcsteer/array_model.hpp"
#include "rcsteer/farfield.hpp"
#include "rcsteer/livg.hpp"
#include "rcsteer/types.hpp"
#include "json.hpp"

namespace rcsteer {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// Grayscale of a phase: -180 deg -> 0.0, +180 deg -> 1.0, linear between.
double phase_to_grayscale(double phase_rad);
RMatrix phase_map(const PhaseMatrix& phases);

enum class PatternFormat { Csv, Json };

PatternFormat parse_pattern_format(std::string_view name);

/// csv: header `theta_deg,af_db` then one row per sample.
/// json: {"theta_deg": [...], "af_db": [...]}.
std::string pattern_text(const FarFieldPattern& pattern, PatternFormat format);
void export_pattern(const FarFieldPattern& pattern, const std::filesystem::path& path, PatternFormat format);

/// Parses the json form back. af_linear is reconstructed relative to a unit peak.
FarFieldPattern parse_pattern_json(std::string_view text);

nlohmann::json complex_matrix_json(const CMatrix& m);
CMatrix complex_matrix_from_json(const nlohmann::json& j);

/// Real matrix as csv with a caller-provided header line (may be empty).
std::string real_matrix_csv(const RMatrix& m, std::string_view header);

/// {direction_deg, magnitude[], phase_deg[], residual} per direction.
nlohmann::json k_table_json(std::span<const Direction> directions, std::span<const KVector> k_table,
                            bool include_phi);

}  // namespace rcsteer
