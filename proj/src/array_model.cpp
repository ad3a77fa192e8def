#include "rcsteer/array_model.hpp"

#include <cmath>
#include <string>

#include "rcsteer/error.hpp"

namespace rcsteer {

ArrayGeometry ArrayGeometry::linear(std::size_t n, double spacing) {
  ArrayGeometry g{n, spacing, Layout::Linear, 0};
  g.validate();
  return g;
}

ArrayGeometry ArrayGeometry::planar(std::size_t n_side, double spacing) {
  ArrayGeometry g{n_side * n_side, spacing, Layout::Planar, n_side};
  g.validate();
  return g;
}

void ArrayGeometry::validate() const {
  if (n_elements < 1) throw InvalidArgument("geometry: n_elements must be >= 1");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InvalidArgument("geometry: spacing must be > 0");
  if (layout == Layout::Planar && (n_side < 1 || n_side * n_side != n_elements))
    throw InvalidArgument("geometry: planar layout requires n_elements == n_side^2");
}

namespace {

bool within_half_turn(double deg) { return std::isfinite(deg) && deg >= -90.0 && deg <= 90.0; }

double lerp_step(double start, double end, std::size_t k, std::size_t steps) {
  if (steps == 1) return start;
  const double t = static_cast<double>(k) / static_cast<double>(steps - 1);
  return start + (end - start) * t;
}

}  // namespace

void ScanPlan::validate() const {
  if (m_steps < 1) throw InvalidArgument("scan: m_steps must be >= 1");
  if (!within_half_turn(theta_start_deg) || !within_half_turn(theta_end_deg) ||
      !within_half_turn(phi_start_deg) || !within_half_turn(phi_end_deg))
    throw InvalidArgument("scan: angles must lie within [-90, 90] degrees");
  if (theta_end_deg < theta_start_deg) throw InvalidArgument("scan: theta_end_deg must be >= theta_start_deg");
}

std::vector<Direction> ScanPlan::directions() const {
  validate();
  std::vector<Direction> out;
  out.reserve(m_steps);
  for (std::size_t k = 0; k < m_steps; ++k) {
    out.push_back({lerp_step(theta_start_deg, theta_end_deg, k, m_steps),
                   lerp_step(phi_start_deg, phi_end_deg, k, m_steps)});
  }
  return out;
}

std::vector<Direction> concat_directions(std::span<const ScanPlan> plans) {
  std::vector<Direction> out;
  for (const auto& plan : plans) {
    auto dirs = plan.directions();
    out.insert(out.end(), dirs.begin(), dirs.end());
  }
  return out;
}

double wrap_radians(double rad) {
  double r = std::remainder(rad, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double wrap_degrees(double deg) {
  double r = std::remainder(deg, 360.0);
  if (r <= -180.0) r += 360.0;
  return r;
}

std::vector<double> cao_phase_offsets(std::size_t n, double base_deg, double step_deg) {
  if (n == 0) throw InvalidArgument("cao_phase_offsets: element count must be >= 1");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = wrap_degrees(base_deg + static_cast<double>(k) * step_deg);
  return out;
}

std::vector<Complex> combine_weighted_groups(std::span<const std::vector<double>> groups,
                                             std::span<const double> ratios) {
  if (groups.empty()) throw InvalidArgument("combine_weighted_groups: no groups");
  if (groups.size() != ratios.size())
    throw DimensionError("combine_weighted_groups: ratio count != group count");
  const std::size_t n = groups.front().size();
  for (const auto& g : groups) {
    if (g.size() != n) throw DimensionError("combine_weighted_groups: groups differ in length");
  }
  bool any_positive = false;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw InvalidArgument("combine_weighted_groups: ratios must be nonnegative");
    any_positive = any_positive || r > 0.0;
  }
  if (!any_positive) throw InvalidArgument("combine_weighted_groups: all ratios are zero");

  std::vector<Complex> out(n, Complex{0.0, 0.0});
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double amp = std::sqrt(ratios[g]);
    for (std::size_t k = 0; k < n; ++k) out[k] += std::polar(amp, deg_to_rad(groups[g][k]));
  }
  return out;
}

double delta_phi(double theta_deg, double spacing) {
  return 2.0 * kPi * spacing * std::sin(deg_to_rad(theta_deg));
}

PlanarStep planar_delta_phi(Direction dir, double spacing) {
  const double s = 2.0 * kPi * spacing * std::sin(deg_to_rad(dir.theta_deg));
  const double phi = deg_to_rad(dir.phi_deg);
  return {s * std::cos(phi), s * std::sin(phi)};
}

double element_phase(const ArrayGeometry& geometry, std::size_t n, Direction dir) {
  if (geometry.layout == Layout::Linear) return static_cast<double>(n) * delta_phi(dir.theta_deg, geometry.spacing);
  const auto step = planar_delta_phi(dir, geometry.spacing);
  const auto i = static_cast<double>(n / geometry.n_side);
  const auto j = static_cast<double>(n % geometry.n_side);
  return i * step.along_rows + j * step.along_cols;
}

PhaseMatrix build_phase_matrix(const ArrayGeometry& geometry, std::span<const Direction> directions) {
  geometry.validate();
  const auto m = static_cast<Eigen::Index>(directions.size());
  const auto n = static_cast<Eigen::Index>(geometry.n_elements);
  PhaseMatrix out{RMatrix(m, n)};
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      out.values(r, c) = wrap_radians(element_phase(geometry, static_cast<std::size_t>(c), directions[r]));
    }
  }
  return out;
}

PhaseMatrix build_phase_matrix(const ArrayGeometry& geometry, const ScanPlan& plan) {
  if (geometry.layout != Layout::Linear)
    throw InvalidArgument("build_phase_matrix: planar geometry, use build_phase_matrix_2d");
  const auto dirs = plan.directions();
  return build_phase_matrix(geometry, std::span<const Direction>(dirs));
}

PhaseMatrix build_phase_matrix_2d(const ArrayGeometry& geometry, const ScanPlan& plan) {
  if (geometry.layout != Layout::Planar)
    throw InvalidArgument("build_phase_matrix_2d: linear geometry, use build_phase_matrix");
  const auto dirs = plan.directions();
  return build_phase_matrix(geometry, std::span<const Direction>(dirs));
}

WeightMatrix build_weight_matrix(const PhaseMatrix& phases, std::span<const double> amplitude_profile) {
  if (amplitude_profile.size() != phases.cols())
    throw DimensionError("build_weight_matrix: amplitude profile length " + std::to_string(amplitude_profile.size()) +
                         " != element count " + std::to_string(phases.cols()));
  for (double a : amplitude_profile) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("build_weight_matrix: amplitudes must be finite and >= 0");
  }
  WeightMatrix out{CMatrix(phases.values.rows(), phases.values.cols()),
                   std::vector<double>(amplitude_profile.begin(), amplitude_profile.end())};
  for (Eigen::Index r = 0; r < phases.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < phases.values.cols(); ++c) {
      out.values(r, c) = std::polar(amplitude_profile[static_cast<std::size_t>(c)], -phases.values(r, c));
    }
  }
  return out;
}

WeightMatrix build_weight_matrix(const PhaseMatrix& phases) {
  const std::vector<double> unit(phases.cols(), 1.0);
  return build_weight_matrix(phases, unit);
}

}  // namespace rcsteer
