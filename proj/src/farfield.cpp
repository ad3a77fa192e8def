#include "rcsteer/farfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcsteer/error.hpp"

namespace rcsteer {

void AngleGrid::validate() const {
  if (!std::isfinite(start_deg) || !std::isfinite(end_deg) || end_deg < start_deg)
    throw InvalidArgument("grid: need finite start_deg <= end_deg");
  if (!(step_deg > 0.0)) throw InvalidArgument("grid: step_deg must be > 0");
}

std::vector<double> AngleGrid::samples() const {
  validate();
  const auto count = static_cast<std::size_t>(std::floor((end_deg - start_deg) / step_deg + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = start_deg + static_cast<double>(k) * step_deg;
  return out;
}

FarFieldPattern make_pattern(std::vector<double> grid_deg, std::vector<double> af_linear) {
  if (grid_deg.size() != af_linear.size()) throw DimensionError("make_pattern: grid and values differ in length");
  FarFieldPattern p{std::move(grid_deg), std::move(af_linear), {}};
  const double peak = p.af_linear.empty() ? 0.0 : *std::max_element(p.af_linear.begin(), p.af_linear.end());
  p.af_db.resize(p.af_linear.size());
  for (std::size_t i = 0; i < p.af_linear.size(); ++i) {
    if (!(peak > 0.0)) {
      p.af_db[i] = 0.0;
    } else if (p.af_linear[i] == peak) {
      p.af_db[i] = 0.0;
    } else {
      p.af_db[i] = p.af_linear[i] > 0.0 ? std::max(20.0 * std::log10(p.af_linear[i] / peak), kDbFloor) : kDbFloor;
    }
  }
  return p;
}

CVector steering_vector(double theta_deg, const ArrayGeometry& geometry, double phi_deg) {
  geometry.validate();
  CVector out(static_cast<Eigen::Index>(geometry.n_elements));
  for (std::size_t n = 0; n < geometry.n_elements; ++n)
    out(static_cast<Eigen::Index>(n)) = std::polar(1.0, element_phase(geometry, n, {theta_deg, phi_deg}));
  return out;
}

SteeringTable::SteeringTable(const ArrayGeometry& geometry, std::vector<double> grid_deg, double phi_deg)
    : grid_(std::move(grid_deg)) {
  geometry.validate();
  if (grid_.empty()) throw InvalidArgument("array_factor: empty angle grid");
  if (!std::is_sorted(grid_.begin(), grid_.end()) ||
      std::adjacent_find(grid_.begin(), grid_.end()) != grid_.end())
    throw InvalidArgument("array_factor: grid must be strictly increasing");
  table_ = kernels::SplitRows(geometry.n_elements, grid_.size());
  for (std::size_t n = 0; n < geometry.n_elements; ++n) {
    for (std::size_t g = 0; g < grid_.size(); ++g)
      table_.set(n, g, std::polar(1.0, element_phase(geometry, n, {grid_[g], phi_deg})));
  }
}

void SteeringTable::magnitudes(std::span<const Complex> weights, std::span<double> out) const {
  if (weights.size() != table_.rows())
    throw DimensionError("array_factor: weight count " + std::to_string(weights.size()) + " != element count " +
                         std::to_string(table_.rows()));
  kernels::weighted_sum_abs(weights, kernels::RowPointers(table_), out);
}

FarFieldPattern SteeringTable::pattern(std::span<const Complex> weights) const {
  std::vector<double> af(grid_.size());
  magnitudes(weights, af);
  return make_pattern(grid_, std::move(af));
}

kernels::SplitRows SteeringTable::row_patterns(const CMatrix& weights) const {
  if (static_cast<std::size_t>(weights.cols()) != table_.rows())
    throw DimensionError("row_patterns: weight width != element count");
  kernels::SplitRows out(static_cast<std::size_t>(weights.rows()), grid_.size());
  std::vector<Complex> w(table_.rows());
  const kernels::RowPointers rows(table_);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t n = 0; n < w.size(); ++n)
      w[n] = weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n));
    kernels::weighted_sum(w, rows, std::span<double>(out.re_row(r), grid_.size()),
                          std::span<double>(out.im_row(r), grid_.size()));
  }
  return out;
}

FarFieldPattern array_factor(std::span<const Complex> weights, std::span<const double> grid_deg,
                             const ArrayGeometry& geometry, double phi_deg) {
  if (grid_deg.empty()) throw InvalidArgument("array_factor: empty angle grid");
  if (weights.size() != geometry.n_elements) throw DimensionError("array_factor: weight count != element count");
  SteeringTable table(geometry, std::vector<double>(grid_deg.begin(), grid_deg.end()), phi_deg);
  return table.pattern(weights);
}

MainLobe main_lobe(std::span<const double> grid_deg, std::span<const double> af_linear) {
  if (af_linear.empty()) throw InvalidArgument("main_lobe: empty pattern");
  if (grid_deg.size() != af_linear.size()) throw DimensionError("main_lobe: grid and values differ in length");
  const std::size_t idx = kernels::argmax(af_linear);
  const double lo = *std::min_element(af_linear.begin(), af_linear.end());
  const double hi = af_linear[idx];
  MainLobe out;
  out.index = idx;
  out.pointing_deg = grid_deg[idx];
  out.mainlobe_mag = hi;
  out.degenerate = (hi - lo) <= 1e-12 * std::max(hi, 1.0);
  return out;
}

MainLobe main_lobe(const FarFieldPattern& pattern) { return main_lobe(pattern.theta_grid_deg, pattern.af_linear); }

std::optional<double> peak_sidelobe_level(const FarFieldPattern& pattern) {
  const auto& af = pattern.af_linear;
  if (af.empty()) throw InvalidArgument("peak_sidelobe_level: empty pattern");
  const std::size_t peak = main_lobe(pattern).index;
  std::size_t left = peak;
  while (left > 0 && af[left - 1] <= af[left]) --left;
  std::size_t right = peak;
  while (right + 1 < af.size() && af[right + 1] <= af[right]) ++right;

  std::optional<double> best;
  for (std::size_t i = 0; i < af.size(); ++i) {
    if (i >= left && i <= right) continue;
    if (!best || pattern.af_db[i] > *best) best = pattern.af_db[i];
  }
  return best;
}

BeamMetrics beam_metrics(const FarFieldPattern& pattern, std::optional<double> reference_deg) {
  const auto lobe = main_lobe(pattern);
  BeamMetrics m;
  m.pointing_deg = lobe.pointing_deg;
  m.mainlobe_mag = lobe.mainlobe_mag;
  m.degenerate = lobe.degenerate;
  m.psll_db = peak_sidelobe_level(pattern);
  if (reference_deg) m.pointing_error_deg = std::abs(lobe.pointing_deg - *reference_deg);
  return m;
}

double pointing_mae(std::span<const BeamMetrics> ideal, std::span<const BeamMetrics> recon) {
  if (ideal.size() != recon.size())
    throw DimensionError("pointing_mae: " + std::to_string(ideal.size()) + " ideal vs " +
                         std::to_string(recon.size()) + " reconstructed metrics");
  if (ideal.empty()) throw InvalidArgument("pointing_mae: no directions");
  double sum = 0.0;
  for (std::size_t m = 0; m < ideal.size(); ++m) sum += std::abs(ideal[m].pointing_deg - recon[m].pointing_deg);
  return sum / static_cast<double>(ideal.size());
}

// ---- planar --------------------------------------------------------------

namespace {

void fill_table(const ArrayGeometry& geometry, std::span<const Direction> points, kernels::SplitRows& table) {
  table = kernels::SplitRows(geometry.n_elements, points.size());
  for (std::size_t n = 0; n < geometry.n_elements; ++n) {
    for (std::size_t p = 0; p < points.size(); ++p)
      table.set(n, p, std::polar(1.0, element_phase(geometry, n, points[p])));
  }
}

std::vector<double> axis(double lo, double hi, double step) {
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

}  // namespace

PlanarSearch::PlanarSearch(const ArrayGeometry& geometry, double fine_step_deg, double coarse_step_deg)
    : geometry_(geometry), fine_step_(fine_step_deg), coarse_step_(coarse_step_deg) {
  geometry_.validate();
  if (!(fine_step_ > 0.0) || !(coarse_step_ > 0.0)) throw InvalidArgument("planar search: steps must be > 0");
  for (double theta : axis(0.0, 90.0, coarse_step_)) {
    for (double phi = -180.0; phi < 180.0 - 1e-9; phi += coarse_step_) coarse_points_.push_back({theta, phi});
  }
  fill_table(geometry_, coarse_points_, coarse_table_);
}

PlanarPointing PlanarSearch::find(std::span<const Complex> weights) const {
  if (weights.size() != geometry_.n_elements) throw DimensionError("planar search: weight count != element count");
  std::vector<double> mags(coarse_points_.size());
  kernels::weighted_sum_abs(weights, kernels::RowPointers(coarse_table_), mags);
  const Direction coarse = coarse_points_[kernels::argmax(mags)];

  const double half = 1.5 * coarse_step_;
  const double theta_lo = std::max(0.0, coarse.theta_deg - half);
  const double theta_hi = std::min(90.0, coarse.theta_deg + half);
  std::vector<Direction> fine;
  for (double theta : axis(theta_lo, theta_hi, fine_step_)) {
    for (double phi : axis(coarse.phi_deg - half, coarse.phi_deg + half, fine_step_)) fine.push_back({theta, phi});
  }
  kernels::SplitRows table;
  fill_table(geometry_, fine, table);
  const kernels::RowPointers rows(table);
  mags.assign(fine.size(), 0.0);
  kernels::weighted_sum_abs(weights, rows, mags);
  const std::size_t best = kernels::argmax(mags);
  return {fine[best].theta_deg, wrap_degrees(fine[best].phi_deg), mags[best]};
}

double angular_separation_deg(Direction a, Direction b) {
  auto unit = [](Direction d) {
    const double t = deg_to_rad(d.theta_deg);
    const double p = deg_to_rad(d.phi_deg);
    return Eigen::Vector3d(std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t));
  };
  const double chord = (unit(a) - unit(b)).norm();
  return rad_to_deg(2.0 * std::asin(std::min(1.0, chord / 2.0)));
}

}  // namespace rcsteer
