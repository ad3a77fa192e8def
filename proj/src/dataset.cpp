#include "rcsteer/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "rcsteer/array_model.hpp"
#include "rcsteer/compression.hpp"
#include "rcsteer/error.hpp"
#include "rcsteer/hash.hpp"
#include "rcsteer/io.hpp"
#include "rcsteer/livg.hpp"
#include "rcsteer/parallel.hpp"
#include "rcsteer/scenario.hpp"

namespace rcsteer {

using nlohmann::json;

DatasetSpec DatasetSpec::full_grid() {
  DatasetSpec s;
  for (int a = 5; a <= 85; a += 5) s.angles_deg.push_back(a);
  for (std::size_t n = 4; n <= 16; ++n) s.elements.push_back(n);
  return s;
}

namespace {

bool is_count(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
}

std::vector<double> parse_angles(const json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v.at(i).is_number()) throw ValidationError("angles_deg[" + std::to_string(i) + "]", "must be a number");
      out.push_back(v.at(i).get<double>());
    }
  } else if (v.is_object()) {
    for (const char* k : {"start", "end", "step"})
      if (!v.contains(k) || !v.at(k).is_number()) throw ValidationError(std::string("angles_deg.") + k, "must be a number");
    const double start = v.at("start").get<double>();
    const double end = v.at("end").get<double>();
    const double step = v.at("step").get<double>();
    if (!(step > 0.0)) throw ValidationError("angles_deg.step", "must be > 0");
    if (end < start) throw ValidationError("angles_deg.end", "must be >= start");
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  } else {
    throw ValidationError("angles_deg", "must be an array or {start, end, step}");
  }
  if (out.empty()) throw ValidationError("angles_deg", "must not be empty");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0 && out[i] <= 90.0))
      throw ValidationError("angles_deg[" + std::to_string(i) + "]", "must lie in (0, 90] degrees");
  }
  return out;
}

std::vector<std::size_t> parse_counts(const json& v, const std::string& key, std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!is_count(v.at(i)))
        throw ValidationError(key + "[" + std::to_string(i) + "]", "must be a nonnegative integer");
      out.push_back(v.at(i).get<std::size_t>());
    }
  } else if (v.is_object()) {
    for (const char* k : {"start", "end"})
      if (!v.contains(k) || !is_count(v.at(k)))
        throw ValidationError(key + "." + k, "must be a nonnegative integer");
    const auto start = v.at("start").get<std::size_t>();
    const auto end = v.at("end").get<std::size_t>();
    if (end < start) throw ValidationError(key + ".end", "must be >= start");
    for (auto n = start; n <= end; ++n) out.push_back(n);
  } else {
    throw ValidationError(key, "must be an array or {start, end}");
  }
  if (out.empty()) throw ValidationError(key, "must not be empty");
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto field = key + "[" + std::to_string(i) + "]";
    if (out[i] < lo || out[i] > hi)
      throw ValidationError(field, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (!seen.insert(out[i]).second) throw ValidationError(field, "duplicates an earlier value");
  }
  return out;
}

json pso_json(const PsoConfig& c) {
  json j{{"swarm_size", c.swarm_size},   {"iterations", c.iterations}, {"inertia", c.inertia},
         {"cognitive", c.cognitive},     {"social", c.social},         {"k_bound", c.k_bound},
         {"penalty_weight", c.penalty_weight}};
  if (c.v_max) j["v_max"] = *c.v_max;
  return j;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::vector<double>> zeros(std::size_t rows, std::size_t cols) {
  return std::vector<std::vector<double>>(rows, std::vector<double>(cols, 0.0));
}

void write_manifest(const std::filesystem::path& path, const json& manifest) {
  auto tmp = path;
  tmp += ".tmp";
  write_text_file(tmp, manifest.dump(2) + "\n");
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

std::vector<std::vector<double>> parse_grid_matrix(const json& j, const std::string& key, std::size_t rows,
                                                   std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw ValidationError(key, "must have " + std::to_string(rows) + " rows");
  auto out = zeros(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || row.size() != cols)
      throw ValidationError(key + "[" + std::to_string(r) + "]", "must have " + std::to_string(cols) + " columns");
    for (std::size_t c = 0; c < cols; ++c) out[r][c] = row.at(c).get<double>();
  }
  return out;
}

}  // namespace

DatasetSpec parse_dataset_spec(const json& doc) {
  if (!doc.is_object()) throw ValidationError("(root)", "dataset spec must be a JSON object");
  static const std::set<std::string> allowed{"angles_deg", "elements", "ranks",  "spacing",    "pso",   "grid",
                                             "objective",  "seed",     "threads", "batch_size", "output"};
  for (const auto& [key, _] : doc.items())
    if (!allowed.count(key)) throw ValidationError(key, "unknown key");

  auto spec = DatasetSpec::full_grid();
  if (doc.contains("angles_deg")) spec.angles_deg = parse_angles(doc.at("angles_deg"));
  if (doc.contains("elements")) spec.elements = parse_counts(doc.at("elements"), "elements", 1, kDatasetMaxElements);
  if (doc.contains("ranks")) spec.ranks = parse_counts(doc.at("ranks"), "ranks", 1, kDatasetTargetRows);
  if (doc.contains("spacing")) {
    if (!doc.at("spacing").is_number() || !(doc.at("spacing").get<double>() > 0.0))
      throw ValidationError("spacing", "must be a number > 0");
    spec.spacing = doc.at("spacing").get<double>();
  }
  if (doc.contains("pso")) spec.pso = parse_pso_config(doc.at("pso"), "pso");
  if (doc.contains("grid")) spec.grid = parse_grid(doc.at("grid"), "grid");
  if (doc.contains("objective")) {
    const auto& o = doc.at("objective");
    if (!o.is_object()) throw ValidationError("objective", "must be an object");
    for (const char* k : {"amp_weight", "angle_weight"}) {
      if (!o.contains(k)) continue;
      if (!o.at(k).is_number() || !(o.at(k).get<double>() >= 0.0))
        throw ValidationError(std::string("objective.") + k, "must be a number >= 0");
    }
    spec.objective.amp = o.value("amp_weight", 1.0);
    spec.objective.angle = o.value("angle_weight", 1.0);
  }
  for (const char* k : {"seed", "threads", "batch_size"}) {
    if (doc.contains(k) && !is_count(doc.at(k)))
      throw ValidationError(k, "must be a nonnegative integer");
  }
  spec.seed = doc.value("seed", spec.seed);
  spec.threads = doc.value("threads", std::size_t{0});
  spec.batch_size = doc.value("batch_size", std::size_t{0});
  if (doc.contains("output")) {
    if (!doc.at("output").is_string() || doc.at("output").get<std::string>().empty())
      throw ValidationError("output", "must be a nonempty path string");
    spec.output = doc.at("output").get<std::string>();
  }
  if (enumerate_cells(spec).empty())
    throw ValidationError("ranks", "no (N, rank) pair satisfies 1 <= rank <= N - 1 for the given elements");
  return spec;
}

DatasetSpec load_dataset_spec(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("(root)", std::string("not valid JSON: ") + e.what());
  }
  return parse_dataset_spec(doc);
}

std::string dataset_spec_fingerprint(const DatasetSpec& s) {
  json j{{"angles_deg", s.angles_deg},
         {"elements", s.elements},
         {"ranks", s.ranks},
         {"spacing", s.spacing},
         {"pso", pso_json(s.pso)},
         {"grid", {s.grid.start_deg, s.grid.end_deg, s.grid.step_deg}},
         {"objective", {s.objective.amp, s.objective.angle}},
         {"seed", s.seed}};
  return j.dump();
}

std::vector<DatasetCell> enumerate_cells(const DatasetSpec& spec) {
  std::vector<DatasetCell> cells;
  for (double a : spec.angles_deg) {
    for (std::size_t n : spec.elements) {
      if (spec.ranks.empty()) {
        for (std::size_t r = 2; r + 1 <= n; ++r) cells.push_back({a, n, r});
      } else {
        for (std::size_t r : spec.ranks)
          if (r >= 1 && r + 1 <= n) cells.push_back({a, n, r});
      }
    }
  }
  return cells;
}

std::uint64_t cell_seed(std::uint64_t base_seed, const DatasetCell& cell) {
  const auto milli = static_cast<std::uint64_t>(std::llround(cell.scan_angle_deg * 1000.0));
  const std::uint64_t key = (milli << 16) ^ (static_cast<std::uint64_t>(cell.n_elements) << 8) ^ cell.rank;
  return splitmix64(base_seed ^ splitmix64(key));
}

DatasetRecord generate_record(const DatasetSpec& spec, const DatasetCell& cell) {
  if (cell.n_elements < 1 || cell.n_elements > kDatasetMaxElements)
    throw InvalidArgument("dataset cell: n_elements must lie in [1, 16]");
  if (cell.rank < 1 || cell.rank > std::min(cell.n_elements, kDatasetTargetRows))
    throw InvalidArgument("dataset cell: rank must lie in [1, min(N, 15)]");

  const auto geometry = ArrayGeometry::linear(cell.n_elements, spec.spacing);
  ScanPlan plan;
  plan.m_steps = kDatasetRows;
  plan.theta_start_deg = 0.0;
  plan.theta_end_deg = cell.scan_angle_deg;
  const auto directions = plan.directions();
  const auto a = build_weight_matrix(build_phase_matrix(geometry, plan)).values;
  const auto b = truncate(svd(a), FixedRank{cell.rank}).matrix;

  PsoConfig config = spec.pso;
  DatasetRecord rec;
  rec.cell = cell;
  rec.seed = cell_seed(spec.seed, cell);
  config.seed = rec.seed;
  config.threads = 1;
  const ObjectiveContext ctx(a, b, geometry, directions, spec.grid, spec.objective);
  const auto result = optimize(ctx, config, cell.rank);

  rec.row_indices = result.livg.row_indices;
  std::sort(rec.row_indices.begin(), rec.row_indices.end());
  rec.objective = result.objective;
  rec.max_k = result.max_k;

  const std::size_t n = cell.n_elements;
  rec.input = zeros(kDatasetRows, kDatasetCols);
  for (std::size_t m = 0; m < kDatasetRows; ++m) {
    for (std::size_t e = 0; e < n; ++e) {
      const auto w = a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(e));
      rec.input[m][e] = w.real();
      rec.input[m][kDatasetMaxElements + e] = w.imag();
    }
  }
  rec.target = zeros(kDatasetTargetRows, kDatasetCols);
  rec.mask.assign(kDatasetTargetRows, false);
  for (std::size_t r = 0; r < rec.row_indices.size(); ++r) {
    rec.mask[r] = true;
    for (std::size_t e = 0; e < n; ++e) {
      const auto w = b(static_cast<Eigen::Index>(rec.row_indices[r]), static_cast<Eigen::Index>(e));
      rec.target[r][e] = w.real();
      rec.target[r][kDatasetMaxElements + e] = w.imag();
    }
  }
  return rec;
}

json record_json(const DatasetRecord& r) {
  return json{{"input", r.input},
              {"target", r.target},
              {"mask", r.mask},
              {"meta",
               {{"scan_angle_deg", r.cell.scan_angle_deg},
                {"n_elements", r.cell.n_elements},
                {"rank", r.cell.rank},
                {"seed", r.seed},
                {"row_indices", r.row_indices},
                {"objective", r.objective},
                {"max_k", r.max_k}}}};
}

DatasetRecord parse_record(const json& j) {
  if (!j.is_object()) throw ValidationError("(record)", "must be a JSON object");
  for (const char* k : {"input", "target", "mask", "meta"})
    if (!j.contains(k)) throw ValidationError(k, "is required");
  DatasetRecord r;
  r.input = parse_grid_matrix(j.at("input"), "input", kDatasetRows, kDatasetCols);
  r.target = parse_grid_matrix(j.at("target"), "target", kDatasetTargetRows, kDatasetCols);
  const auto& mask = j.at("mask");
  if (!mask.is_array() || mask.size() != kDatasetTargetRows)
    throw ValidationError("mask", "must have " + std::to_string(kDatasetTargetRows) + " booleans");
  for (const auto& v : mask) r.mask.push_back(v.get<bool>());
  const auto& meta = j.at("meta");
  try {
    r.cell.scan_angle_deg = meta.at("scan_angle_deg").get<double>();
    r.cell.n_elements = meta.at("n_elements").get<std::size_t>();
    r.cell.rank = meta.at("rank").get<std::size_t>();
    r.seed = meta.at("seed").get<std::uint64_t>();
    r.row_indices = meta.at("row_indices").get<std::vector<std::size_t>>();
    r.objective = meta.at("objective").get<double>();
    r.max_k = meta.at("max_k").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError("meta", e.what());
  }
  const auto valid = static_cast<std::size_t>(std::count(r.mask.begin(), r.mask.end(), true));
  if (valid != r.cell.rank) throw ValidationError("mask", "true-count must equal meta.rank");
  return r;
}

std::filesystem::path dataset_manifest_path(const std::filesystem::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

DatasetRunReport generate_dataset(const DatasetSpec& spec, std::optional<std::size_t> max_records) {
  if (spec.output.empty()) throw ValidationError("output", "is required");
  const auto cells = enumerate_cells(spec);
  const auto spec_hash = sha256_hex(dataset_spec_fingerprint(spec));
  const auto manifest_path = dataset_manifest_path(spec.output);

  DatasetRunReport report;
  report.total = cells.size();
  std::uintmax_t offset = 0;
  if (std::filesystem::exists(manifest_path) && std::filesystem::exists(spec.output)) {
    json m;
    try {
      m = json::parse(read_text_file(manifest_path));
    } catch (const json::parse_error&) {
      m = json::object();
    }
    if (m.value("spec_sha256", std::string()) == spec_hash && m.value("total", std::size_t{0}) == cells.size()) {
      const auto completed = m.value("completed", std::size_t{0});
      const auto bytes = m.value("bytes", std::uintmax_t{0});
      if (completed <= cells.size() && bytes <= std::filesystem::file_size(spec.output)) {
        report.resumed_from = completed;
        offset = bytes;
      }
    }
  }
  if (!spec.output.parent_path().empty()) std::filesystem::create_directories(spec.output.parent_path());
  if (offset == 0) {
    std::ofstream(spec.output, std::ios::binary | std::ios::trunc);
  } else {
    std::filesystem::resize_file(spec.output, offset);
  }

  auto checkpoint = [&](std::size_t completed, std::uintmax_t bytes, const std::string& file_hash) {
    json m{{"spec_sha256", spec_hash}, {"total", cells.size()}, {"completed", completed}, {"bytes", bytes}};
    if (!file_hash.empty()) m["sha256"] = file_hash;
    write_manifest(manifest_path, m);
  };

  const std::size_t workers = resolve_threads(spec.threads);
  const std::size_t batch = spec.batch_size ? spec.batch_size : workers;
  std::size_t next = report.resumed_from;
  const std::size_t stop = max_records ? std::min(cells.size(), next + *max_records) : cells.size();
  checkpoint(next, offset, {});
  while (next < stop) {
    const std::size_t count = std::min(batch, stop - next);
    std::vector<std::string> lines(count);
    parallel_for(count, workers, [&](std::size_t i) {
      lines[i] = record_json(generate_record(spec, cells[next + i])).dump() + "\n";
    });
    {
      std::ofstream out(spec.output, std::ios::binary | std::ios::app);
      for (const auto& l : lines) out << l;
      out.flush();
      if (!out) throw IoError("cannot append to " + spec.output.string());
    }
    for (const auto& l : lines) offset += l.size();
    next += count;
    report.written += count;
    checkpoint(next, offset, {});
  }
  if (next == cells.size()) {
    report.sha256 = sha256_file(spec.output);
    checkpoint(next, offset, report.sha256);
  }
  return report;
}

}  // namespace rcsteer
