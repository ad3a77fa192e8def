#include "rcsteer/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rcsteer/error.hpp"

namespace rcsteer {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double phase_to_grayscale(double phase_rad) { return (rad_to_deg(phase_rad) + 180.0) / 360.0; }

RMatrix phase_map(const PhaseMatrix& phases) {
  return phases.values.unaryExpr([](double p) { return phase_to_grayscale(p); });
}

PatternFormat parse_pattern_format(std::string_view name) {
  if (name == "csv") return PatternFormat::Csv;
  if (name == "json") return PatternFormat::Json;
  throw ValidationError("format", "must be 'csv' or 'json', got '" + std::string(name) + "'");
}

std::string pattern_text(const FarFieldPattern& pattern, PatternFormat format) {
  if (format == PatternFormat::Json) {
    nlohmann::json j;
    j["theta_deg"] = pattern.theta_grid_deg;
    j["af_db"] = pattern.af_db;
    return j.dump() + "\n";
  }
  std::string out = "theta_deg,af_db\n";
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    out += format_double(pattern.theta_grid_deg[i]);
    out += ',';
    out += format_double(pattern.af_db[i]);
    out += '\n';
  }
  return out;
}

void export_pattern(const FarFieldPattern& pattern, const std::filesystem::path& path, PatternFormat format) {
  write_text_file(path, pattern_text(pattern, format));
}

FarFieldPattern parse_pattern_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  FarFieldPattern p;
  p.theta_grid_deg = j.at("theta_deg").get<std::vector<double>>();
  p.af_db = j.at("af_db").get<std::vector<double>>();
  if (p.theta_grid_deg.size() != p.af_db.size()) throw DimensionError("pattern json: column lengths differ");
  p.af_linear.reserve(p.af_db.size());
  for (double db : p.af_db) p.af_linear.push_back(db <= kDbFloor ? 0.0 : std::pow(10.0, db / 20.0));
  return p;
}

nlohmann::json complex_matrix_json(const CMatrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row_re(static_cast<std::size_t>(m.cols()));
    std::vector<double> row_im(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row_re[static_cast<std::size_t>(c)] = m(r, c).real();
      row_im[static_cast<std::size_t>(c)] = m(r, c).imag();
    }
    re.push_back(row_re);
    im.push_back(row_im);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

CMatrix complex_matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = {j.at("re").at(r).at(c).get<double>(), j.at("im").at(r).at(c).get<double>()};
  }
  return m;
}

std::string real_matrix_csv(const RMatrix& m, std::string_view header) {
  std::string out;
  if (!header.empty()) {
    out += header;
    out += '\n';
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

nlohmann::json k_table_json(std::span<const Direction> directions, std::span<const KVector> k_table,
                            bool include_phi) {
  if (directions.size() != k_table.size()) throw DimensionError("k_table_json: direction count != K count");
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t m = 0; m < k_table.size(); ++m) {
    const auto& k = k_table[m];
    std::vector<double> mag;
    std::vector<double> phase;
    for (Eigen::Index r = 0; r < k.coefficients.size(); ++r) {
      mag.push_back(std::abs(k.coefficients(r)));
      phase.push_back(rad_to_deg(std::arg(k.coefficients(r))));
    }
    nlohmann::json rec{{"direction_deg", directions[m].theta_deg},
                       {"magnitude", mag},
                       {"phase_deg", phase},
                       {"residual", k.residual}};
    if (include_phi) rec["direction_phi_deg"] = directions[m].phi_deg;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace rcsteer
