#include "rcsteer/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rcsteer/error.hpp"
#include "rcsteer/hash.hpp"
#include "rcsteer/io.hpp"

namespace rcsteer {

using nlohmann::json;

namespace {

// ---- validated field access ----------------------------------------------

bool is_count(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ValidationError(join(path, key), "unknown key");
  }
}

const json& require_object(const json& parent, const std::string& key, const std::string& path) {
  const auto field = join(path, key);
  if (!parent.contains(key)) throw ValidationError(field, "is required");
  if (!parent.at(key).is_object()) throw ValidationError(field, "must be an object");
  return parent.at(key);
}

double get_number(const json& obj, const std::string& key, const std::string& path, std::optional<double> fallback) {
  const auto field = join(path, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(field, "is required");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(field, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(field, "must be finite");
  return x;
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& path,
                        std::optional<std::uint64_t> fallback, std::uint64_t min_value) {
  const auto field = join(path, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(field, "is required");
  }
  const auto& v = obj.at(key);
  if (!is_count(v)) throw ValidationError(field, "must be a nonnegative integer");
  const auto x = v.get<std::uint64_t>();
  if (x < min_value) throw ValidationError(field, "must be >= " + std::to_string(min_value));
  return x;
}

std::string get_string(const json& obj, const std::string& key, const std::string& path,
                       std::optional<std::string> fallback) {
  const auto field = join(path, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(field, "is required");
  }
  if (!obj.at(key).is_string()) throw ValidationError(field, "must be a string");
  return obj.at(key).get<std::string>();
}

void check_angle(double deg, const std::string& field) {
  if (deg < -90.0 || deg > 90.0) throw ValidationError(field, "must lie within [-90, 90] degrees");
}

ArrayGeometry parse_geometry(const json& doc) {
  const auto& g = require_object(doc, "geometry", "");
  reject_unknown(g, "geometry", {"layout", "n_elements", "n_side", "spacing"});
  const auto layout = get_string(g, "layout", "geometry", std::string("linear"));
  const double spacing = get_number(g, "spacing", "geometry", 0.5);
  if (!(spacing > 0.0)) throw ValidationError("geometry.spacing", "must be > 0");
  if (layout == "linear") {
    const auto n = get_count(g, "n_elements", "geometry", std::nullopt, 1);
    return ArrayGeometry{n, spacing, Layout::Linear, 0};
  }
  if (layout == "planar") {
    const auto side = get_count(g, "n_side", "geometry", std::nullopt, 1);
    if (g.contains("n_elements") && get_count(g, "n_elements", "geometry", std::nullopt, 1) != side * side)
      throw ValidationError("geometry.n_elements", "must equal n_side^2 for a planar layout");
    return ArrayGeometry{side * side, spacing, Layout::Planar, side};
  }
  throw ValidationError("geometry.layout", "must be 'linear' or 'planar'");
}

ScanPlan parse_plan(const json& s, const std::string& path) {
  if (!s.is_object()) throw ValidationError(path, "must be an object");
  reject_unknown(s, path, {"m_steps", "theta_start_deg", "theta_end_deg", "phi_start_deg", "phi_end_deg"});
  ScanPlan p;
  p.m_steps = get_count(s, "m_steps", path, std::nullopt, 1);
  p.theta_start_deg = get_number(s, "theta_start_deg", path, std::nullopt);
  p.theta_end_deg = get_number(s, "theta_end_deg", path, p.theta_start_deg);
  p.phi_start_deg = get_number(s, "phi_start_deg", path, 0.0);
  p.phi_end_deg = get_number(s, "phi_end_deg", path, p.phi_start_deg);
  check_angle(p.theta_start_deg, join(path, "theta_start_deg"));
  check_angle(p.theta_end_deg, join(path, "theta_end_deg"));
  check_angle(p.phi_start_deg, join(path, "phi_start_deg"));
  check_angle(p.phi_end_deg, join(path, "phi_end_deg"));
  if (p.theta_end_deg < p.theta_start_deg)
    throw ValidationError(join(path, "theta_end_deg"), "must be >= theta_start_deg");
  return p;
}

std::vector<ScanPlan> parse_scan(const json& doc) {
  if (!doc.contains("scan")) throw ValidationError("scan", "is required");
  const auto& s = doc.at("scan");
  if (s.is_object()) return {parse_plan(s, "scan")};
  if (!s.is_array() || s.empty()) throw ValidationError("scan", "must be an object or a nonempty array of objects");
  std::vector<ScanPlan> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(parse_plan(s.at(i), "scan[" + std::to_string(i) + "]"));
  return out;
}

void parse_truncation(const json& doc, Scenario& sc, std::size_t max_rank) {
  const auto& t = require_object(doc, "truncation", "");
  reject_unknown(t, "truncation", {"policy", "rank", "epsilon", "fraction", "energy_measure"});
  const auto measure = get_string(t, "energy_measure", "truncation", std::string("squared"));
  if (measure == "squared") {
    sc.energy_measure = EnergyMeasure::SquaredSigma;
  } else if (measure == "sum") {
    sc.energy_measure = EnergyMeasure::Sigma;
  } else {
    throw ValidationError("truncation.energy_measure", "must be 'squared' or 'sum'");
  }
  const auto policy = get_string(t, "policy", "truncation", std::nullopt);
  if (policy == "fixed_rank") {
    const auto r = get_count(t, "rank", "truncation", std::nullopt, 1);
    if (r > max_rank) throw ValidationError("truncation.rank", "must be <= min(M, N) = " + std::to_string(max_rank));
    sc.truncation = FixedRank{r};
  } else if (policy == "threshold") {
    const double eps = get_number(t, "epsilon", "truncation", std::nullopt);
    if (!(eps >= 0.0)) throw ValidationError("truncation.epsilon", "must be >= 0");
    sc.truncation = Threshold{eps};
  } else if (policy == "energy_fraction") {
    const double f = get_number(t, "fraction", "truncation", std::nullopt);
    if (!(f > 0.0 && f <= 1.0)) throw ValidationError("truncation.fraction", "must lie in (0, 1]");
    sc.truncation = EnergyFraction{f};
  } else {
    throw ValidationError("truncation.policy", "must be 'fixed_rank', 'threshold' or 'energy_fraction'");
  }
}

void parse_livg(const json& doc, Scenario& sc, std::size_t m, std::size_t n) {
  const auto& l = require_object(doc, "livg", "");
  reject_unknown(l, "livg", {"source", "rank", "indices"});
  const auto source = get_string(l, "source", "livg", std::nullopt);
  const std::size_t max_rank = std::min(m, n);
  if (source == "explicit") {
    sc.livg.source = LivgSource::Explicit;
    if (!l.contains("indices") || !l.at("indices").is_array() || l.at("indices").empty())
      throw ValidationError("livg.indices", "must be a nonempty array of row indices");
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < l.at("indices").size(); ++i) {
      const auto& v = l.at("indices").at(i);
      const auto field = "livg.indices[" + std::to_string(i) + "]";
      if (!is_count(v)) throw ValidationError(field, "must be a nonnegative integer");
      const auto idx = v.get<std::size_t>();
      if (idx >= m) throw ValidationError(field, "must be < M = " + std::to_string(m));
      if (!seen.insert(idx).second) throw ValidationError(field, "duplicates an earlier index");
      sc.livg.indices.push_back(idx);
    }
    sc.livg.rank = sc.livg.indices.size();
    if (sc.livg.rank > n) throw ValidationError("livg.indices", "count must be <= N = " + std::to_string(n));
    return;
  }
  if (source == "equally_spaced") {
    sc.livg.source = LivgSource::EquallySpaced;
  } else if (source == "pso") {
    sc.livg.source = LivgSource::Pso;
  } else {
    throw ValidationError("livg.source", "must be 'explicit', 'equally_spaced' or 'pso'");
  }
  sc.livg.rank = get_count(l, "rank", "livg", std::nullopt, 1);
  if (sc.livg.rank > max_rank) throw ValidationError("livg.rank", "must be <= min(M, N) = " + std::to_string(max_rank));
}

}  // namespace

PsoConfig parse_pso_config(const json& p, const std::string& path) {
  PsoConfig c;
  if (!p.is_object()) throw ValidationError(path, "must be an object");
  reject_unknown(p, path,
                 {"swarm_size", "iterations", "inertia", "cognitive", "social", "v_max", "k_bound", "penalty_weight",
                  "threads"});
  c.swarm_size = get_count(p, "swarm_size", path, c.swarm_size, 2);
  c.iterations = get_count(p, "iterations", path, c.iterations, 1);
  c.inertia = get_number(p, "inertia", path, c.inertia);
  if (!(c.inertia >= 0.0 && c.inertia <= 1.0)) throw ValidationError(join(path, "inertia"), "must lie in [0, 1]");
  c.cognitive = get_number(p, "cognitive", path, c.cognitive);
  if (!(c.cognitive >= 0.0)) throw ValidationError(join(path, "cognitive"), "must be >= 0");
  c.social = get_number(p, "social", path, c.social);
  if (!(c.social >= 0.0)) throw ValidationError(join(path, "social"), "must be >= 0");
  if (p.contains("v_max")) {
    c.v_max = get_number(p, "v_max", path, std::nullopt);
    if (!(*c.v_max > 0.0)) throw ValidationError(join(path, "v_max"), "must be > 0");
  }
  c.k_bound = get_number(p, "k_bound", path, c.k_bound);
  if (!(c.k_bound > 0.0)) throw ValidationError(join(path, "k_bound"), "must be > 0");
  c.penalty_weight = get_number(p, "penalty_weight", path, c.penalty_weight);
  if (!(c.penalty_weight >= 0.0)) throw ValidationError(join(path, "penalty_weight"), "must be >= 0");
  c.threads = get_count(p, "threads", path, 0, 0);
  return c;
}

AngleGrid parse_grid(const json& g, const std::string& path) {
  AngleGrid grid;
  if (!g.is_object()) throw ValidationError(path, "must be an object");
  reject_unknown(g, path, {"start_deg", "end_deg", "step_deg"});
  grid.start_deg = get_number(g, "start_deg", path, grid.start_deg);
  grid.end_deg = get_number(g, "end_deg", path, grid.end_deg);
  grid.step_deg = get_number(g, "step_deg", path, grid.step_deg);
  if (!(grid.step_deg > 0.0)) throw ValidationError(join(path, "step_deg"), "must be > 0");
  if (grid.end_deg < grid.start_deg) throw ValidationError(join(path, "end_deg"), "must be >= start_deg");
  return grid;
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  (void)base_dir;
  if (!doc.is_object()) throw ValidationError("(root)", "scenario must be a JSON object");
  reject_unknown(doc, "",
                 {"name", "geometry", "scan", "amplitude_profile", "truncation", "livg", "pso", "objective", "grid",
                  "output", "seed"});
  Scenario sc;
  sc.name = get_string(doc, "name", "", std::nullopt);
  if (sc.name.empty()) throw ValidationError("name", "must not be empty");
  sc.geometry = parse_geometry(doc);
  sc.scan = parse_scan(doc);
  std::size_t m = 0;
  for (const auto& p : sc.scan) m += p.m_steps;
  const std::size_t n = sc.geometry.n_elements;

  if (doc.contains("amplitude_profile")) {
    const auto& a = doc.at("amplitude_profile");
    if (!a.is_array() || a.size() != n)
      throw ValidationError("amplitude_profile", "must be an array of N = " + std::to_string(n) + " numbers");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a.at(i).is_number() || !(a.at(i).get<double>() >= 0.0))
        throw ValidationError("amplitude_profile[" + std::to_string(i) + "]", "must be a number >= 0");
      sc.amplitude_profile.push_back(a.at(i).get<double>());
    }
  }

  parse_truncation(doc, sc, std::min(m, n));
  parse_livg(doc, sc, m, n);
  if (doc.contains("pso")) sc.pso = parse_pso_config(doc.at("pso"), "pso");

  if (doc.contains("objective")) {
    const auto& o = doc.at("objective");
    if (!o.is_object()) throw ValidationError("objective", "must be an object");
    reject_unknown(o, "objective", {"amp_weight", "angle_weight"});
    sc.objective.amp = get_number(o, "amp_weight", "objective", 1.0);
    sc.objective.angle = get_number(o, "angle_weight", "objective", 1.0);
    if (!(sc.objective.amp >= 0.0)) throw ValidationError("objective.amp_weight", "must be >= 0");
    if (!(sc.objective.angle >= 0.0)) throw ValidationError("objective.angle_weight", "must be >= 0");
  }
  if (doc.contains("grid")) sc.grid = parse_grid(doc.at("grid"), "grid");

  sc.output_dir = std::filesystem::path("out") / sc.name;
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    if (!o.is_object()) throw ValidationError("output", "must be an object");
    reject_unknown(o, "output", {"directory", "write_patterns"});
    if (o.contains("directory")) sc.output_dir = get_string(o, "directory", "output", std::nullopt);
    if (o.contains("write_patterns")) {
      if (!o.at("write_patterns").is_boolean()) throw ValidationError("output.write_patterns", "must be a boolean");
      sc.write_patterns = o.at("write_patterns").get<bool>();
    }
  }
  sc.seed = get_count(doc, "seed", "", 1, 0);
  sc.pso.seed = sc.seed;
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("(root)", std::string("not valid JSON: ") + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

void apply_overrides(Scenario& scenario, const ScenarioOverrides& overrides) {
  if (overrides.seed) {
    scenario.seed = *overrides.seed;
    scenario.pso.seed = *overrides.seed;
  }
  if (overrides.output_dir) scenario.output_dir = *overrides.output_dir;
  if (overrides.grid_step_deg) {
    if (!(*overrides.grid_step_deg > 0.0)) throw ValidationError("--grid-step", "must be > 0");
    scenario.grid.step_deg = *overrides.grid_step_deg;
  }
}

// ---- pipeline ------------------------------------------------------------

namespace {

std::vector<Complex> row_of(const CMatrix& m, Eigen::Index r) {
  std::vector<Complex> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(c)] = m(r, c);
  return out;
}

double wrapped_abs_diff_deg(double a, double b) { return std::abs(wrap_degrees(a - b)); }

}  // namespace

CompressionReport run_compression(const Scenario& sc) {
  CompressionReport r;
  r.directions = concat_directions(sc.scan);
  r.phases = build_phase_matrix(sc.geometry, std::span<const Direction>(r.directions));
  r.weights = sc.amplitude_profile.empty() ? build_weight_matrix(r.phases)
                                           : build_weight_matrix(r.phases, sc.amplitude_profile);
  r.svd = svd(r.weights.values);
  r.compressed = truncate(r.svd, sc.truncation, sc.energy_measure);
  r.reconstruction_error = reconstruction_error(r.weights.values, r.compressed.matrix);
  return r;
}

PipelineResult run_pipeline(const Scenario& sc) {
  auto comp = run_compression(sc);
  PipelineResult res;
  res.scenario = sc;
  res.directions = std::move(comp.directions);
  res.phases = std::move(comp.phases);
  res.weights = std::move(comp.weights);
  res.svd = std::move(comp.svd);
  res.compressed = std::move(comp.compressed);
  res.reconstruction_error = comp.reconstruction_error;
  res.energy_fraction = energy_fraction(res.svd, res.compressed.rank, sc.energy_measure);

  const CMatrix& a = res.weights.values;
  const CMatrix& b = res.compressed.matrix;
  const auto m_steps = static_cast<std::size_t>(a.rows());
  const ObjectiveContext ctx(a, b, sc.geometry, res.directions, sc.grid, sc.objective);

  switch (sc.livg.source) {
    case LivgSource::Explicit:
      res.livg = select_livg(b, sc.livg.indices);
      break;
    case LivgSource::EquallySpaced:
      res.livg = select_livg(b, equally_spaced_indices(m_steps, sc.livg.rank));
      break;
    case LivgSource::Pso: {
      res.pso = optimize(ctx, sc.pso, sc.livg.rank);
      res.livg = res.pso->livg;
      break;
    }
  }
  res.k_table = KSolver(res.livg).solve_rows(b);
  res.score = ctx.evaluate(res.livg.row_indices, sc.pso.penalty());

  const bool linear = sc.geometry.layout == Layout::Linear;
  const auto grid = sc.grid.samples();
  std::optional<SteeringTable> table;
  std::optional<PlanarSearch> planar;
  if (linear) {
    table.emplace(sc.geometry, grid);
  } else {
    planar.emplace(sc.geometry, sc.grid.step_deg);
  }

  res.reports.resize(m_steps);
  for (std::size_t m = 0; m < m_steps; ++m) {
    auto& rep = res.reports[m];
    rep.direction = res.directions[m];
    const auto& k = res.k_table[m];
    rep.max_k = max_k_magnitude(k);
    rep.residual = k.residual;
    res.max_k = std::max(res.max_k, rep.max_k);

    const auto ideal_w = row_of(a, static_cast<Eigen::Index>(m));
    const CVector recon_v = reconstruct_row(res.livg, k);
    std::vector<Complex> recon_w(recon_v.data(), recon_v.data() + recon_v.size());

    FarFieldPattern ideal_p;
    FarFieldPattern recon_p;
    if (linear) {
      ideal_p = table->pattern(ideal_w);
      recon_p = table->pattern(recon_w);
      rep.ideal = beam_metrics(ideal_p, rep.direction.theta_deg);
      rep.recon = beam_metrics(recon_p, rep.ideal.pointing_deg);
      rep.separation_deg = *rep.recon.pointing_error_deg;
    } else {
      const auto pi = planar->find(ideal_w);
      const auto pr = planar->find(recon_w);
      const SteeringTable cut(sc.geometry, grid, pi.phi_deg);
      ideal_p = cut.pattern(ideal_w);
      recon_p = cut.pattern(recon_w);
      rep.ideal = beam_metrics(ideal_p);
      rep.recon = beam_metrics(recon_p);
      rep.ideal.pointing_deg = pi.theta_deg;
      rep.ideal.mainlobe_mag = pi.magnitude;
      rep.ideal.pointing_error_deg = angular_separation_deg({pi.theta_deg, pi.phi_deg}, rep.direction);
      rep.recon.pointing_deg = pr.theta_deg;
      rep.recon.mainlobe_mag = pr.magnitude;
      rep.ideal_phi_deg = pi.phi_deg;
      rep.recon_phi_deg = pr.phi_deg;
      rep.separation_deg = angular_separation_deg({pi.theta_deg, pi.phi_deg}, {pr.theta_deg, pr.phi_deg});
      rep.recon.pointing_error_deg = rep.separation_deg;
    }
    if (sc.write_patterns) {
      res.ideal_patterns.push_back(std::move(ideal_p));
      res.recon_patterns.push_back(std::move(recon_p));
    }
  }

  double sep_sum = 0.0;
  for (const auto& rep : res.reports) sep_sum += rep.separation_deg;
  res.pointing_mae_deg = sep_sum / static_cast<double>(m_steps);

  std::size_t offset = 0;
  for (const auto& plan : sc.scan) {
    SegmentError e;
    for (std::size_t i = offset; i < offset + plan.m_steps; ++i) {
      const auto& rep = res.reports[i];
      e.theta_mae_deg += std::abs(rep.ideal.pointing_deg - rep.recon.pointing_deg);
      if (!linear) e.phi_mae_deg += wrapped_abs_diff_deg(rep.ideal_phi_deg, rep.recon_phi_deg);
    }
    e.theta_mae_deg /= static_cast<double>(plan.m_steps);
    e.phi_mae_deg /= static_cast<double>(plan.m_steps);
    res.segment_errors.push_back(e);
    offset += plan.m_steps;
  }

  for (std::size_t r = 0; r < res.livg.rank(); ++r) {
    const auto w = row_of(res.livg.rows, static_cast<Eigen::Index>(r));
    res.livg_row_pointing_deg.push_back(linear ? main_lobe(table->pattern(w)).pointing_deg
                                               : planar->find(w).theta_deg);
  }
  return res;
}

// ---- output --------------------------------------------------------------

json summary_json(const PipelineResult& r) {
  const auto& sc = r.scenario;
  json segments = json::array();
  for (const auto& e : r.segment_errors) segments.push_back({{"theta_mae_deg", e.theta_mae_deg}, {"phi_mae_deg", e.phi_mae_deg}});
  json j{{"name", sc.name},
         {"layout", sc.geometry.layout == Layout::Linear ? "linear" : "planar"},
         {"n_elements", sc.geometry.n_elements},
         {"spacing", sc.geometry.spacing},
         {"m_steps", r.directions.size()},
         {"truncation_rank", r.compressed.rank},
         {"energy_measure", sc.energy_measure == EnergyMeasure::SquaredSigma ? "squared" : "sum"},
         {"energy_fraction", r.energy_fraction},
         {"reconstruction_error", r.reconstruction_error},
         {"livg_rank", r.livg.rank()},
         {"livg_indices", r.livg.row_indices},
         {"livg_row_pointing_deg", r.livg_row_pointing_deg},
         {"pointing_mae_deg", r.pointing_mae_deg},
         {"segments", segments},
         {"max_k", r.max_k},
         {"k_bound", sc.pso.k_bound},
         {"constraint_satisfied", r.max_k < sc.pso.k_bound},
         {"objective", r.score.objective},
         {"objective_base", r.score.base},
         {"grid_step_deg", sc.grid.step_deg},
         {"seed", sc.seed}};
  if (r.pso) {
    j["pso"] = {{"iterations", sc.pso.iterations},
                {"swarm_size", sc.pso.swarm_size},
                {"final_objective", r.pso->objective},
                {"evaluations", r.pso->evaluations},
                {"constraint_satisfied", r.pso->constraint_satisfied}};
  }
  return j;
}

std::string write_bundle(const std::filesystem::path& dir, const std::string& name,
                         const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  auto sorted = files;
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  json entries = json::array();
  for (const auto& [rel, content] : sorted) {
    write_text_file(dir / rel, content);
    entries.push_back({{"path", rel}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  }
  const std::string manifest = json{{"name", name}, {"files", entries}}.dump(2) + "\n";
  write_text_file(dir / "manifest.json", manifest);
  return manifest;
}

namespace {

std::string patterns_csv(const std::vector<FarFieldPattern>& patterns) {
  std::string out = "theta_deg";
  for (std::size_t m = 0; m < patterns.size(); ++m) out += ",m" + std::to_string(m);
  out += '\n';
  if (patterns.empty()) return out;
  for (std::size_t g = 0; g < patterns.front().size(); ++g) {
    out += format_double(patterns.front().theta_grid_deg[g]);
    for (const auto& p : patterns) {
      out += ',';
      out += format_double(p.af_db[g]);
    }
    out += '\n';
  }
  return out;
}

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string metrics_csv(const PipelineResult& r) {
  std::string out =
      "m,theta_deg,phi_deg,ideal_pointing_deg,recon_pointing_deg,ideal_phi_deg,recon_phi_deg,ideal_mag,recon_mag,"
      "pointing_error_deg,ideal_psll_db,recon_psll_db,max_k,residual\n";
  for (std::size_t m = 0; m < r.reports.size(); ++m) {
    const auto& x = r.reports[m];
    const std::string fields[] = {std::to_string(m),
                                  format_double(x.direction.theta_deg),
                                  format_double(x.direction.phi_deg),
                                  format_double(x.ideal.pointing_deg),
                                  format_double(x.recon.pointing_deg),
                                  format_double(x.ideal_phi_deg),
                                  format_double(x.recon_phi_deg),
                                  format_double(x.ideal.mainlobe_mag),
                                  format_double(x.recon.mainlobe_mag),
                                  format_double(x.separation_deg),
                                  opt_text(x.ideal.psll_db),
                                  opt_text(x.recon.psll_db),
                                  format_double(x.max_k),
                                  format_double(x.residual)};
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

std::string direction_matrix_csv(const std::vector<Direction>& dirs, const RMatrix& m) {
  std::string header = "theta_deg,phi_deg";
  for (Eigen::Index c = 0; c < m.cols(); ++c) header += ",e" + std::to_string(c);
  RMatrix with_dirs(m.rows(), m.cols() + 2);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    with_dirs(r, 0) = dirs[static_cast<std::size_t>(r)].theta_deg;
    with_dirs(r, 1) = dirs[static_cast<std::size_t>(r)].phi_deg;
  }
  with_dirs.rightCols(m.cols()) = m;
  return real_matrix_csv(with_dirs, header);
}

}  // namespace

std::string singular_values_csv(const TruncatedSvd& svd, EnergyMeasure measure) {
  std::string out = "index,sigma,cumulative_energy\n";
  for (std::size_t i = 0; i < svd.sigma.size(); ++i) {
    const bool any = std::any_of(svd.sigma.begin(), svd.sigma.end(), [](double s) { return s > 0.0; });
    out += std::to_string(i) + "," + format_double(svd.sigma[i]) + "," +
           (any ? format_double(energy_fraction(svd, i + 1, measure)) : std::string("0")) + "\n";
  }
  return out;
}

std::string write_pipeline_bundle(const PipelineResult& r, const std::filesystem::path& dir) {
  const bool planar = r.scenario.geometry.layout == Layout::Planar;
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("summary.json", summary_json(r).dump(2) + "\n");
  files.emplace_back("phases.csv", direction_matrix_csv(r.directions, r.phases.values));
  files.emplace_back("phase_map.csv", direction_matrix_csv(r.directions, phase_map(r.phases)));
  files.emplace_back("weights.json", complex_matrix_json(r.weights.values).dump() + "\n");
  files.emplace_back("compressed.json", complex_matrix_json(r.compressed.matrix).dump() + "\n");
  files.emplace_back("singular_values.csv", singular_values_csv(r.svd, r.scenario.energy_measure));
  json livg{{"row_indices", r.livg.row_indices},
            {"rows", complex_matrix_json(r.livg.rows)},
            {"row_pointing_deg", r.livg_row_pointing_deg}};
  files.emplace_back("livg.json", livg.dump() + "\n");
  files.emplace_back("k_table.json", k_table_json(r.directions, r.k_table, planar).dump() + "\n");
  files.emplace_back("metrics.csv", metrics_csv(r));
  if (r.scenario.write_patterns) {
    files.emplace_back("patterns_ideal.csv", patterns_csv(r.ideal_patterns));
    files.emplace_back("patterns_recon.csv", patterns_csv(r.recon_patterns));
  }
  if (r.pso) {
    std::string hist = "iteration,gbest_objective\n";
    for (std::size_t t = 0; t < r.pso->history.size(); ++t)
      hist += std::to_string(t) + "," + format_double(r.pso->history[t]) + "\n";
    files.emplace_back("pso_history.csv", hist);
  }
  return write_bundle(dir, r.scenario.name, files);
}

std::string run_scenario(const std::filesystem::path& path, const ScenarioOverrides& overrides) {
  auto sc = load_scenario(path);
  apply_overrides(sc, overrides);
  const auto result = run_pipeline(sc);
  return write_pipeline_bundle(result, sc.output_dir);
}

}  // namespace rcsteer
