#pragma once

// Array geometry, scan plans, steering phase matrices and ideal weights.
//
// Conventions: directions are rows, elements are columns (M x N). Weights
// carry exp(-j*phase); the steering vector carries exp(+j*phase), so the
// ideal row for direction m peaks at theta_m. Phase ramps use sin(theta)
// (broadside reference).

#include <cstddef>
#include <span>
#include <vector>

#include "rcsteer/types.hpp"

namespace rcsteer {

enum class Layout { Linear, Planar };

struct ArrayGeometry {
  std::size_t n_elements = 1;
  double spacing = 0.5;  // element pitch in wavelengths
  Layout layout = Layout::Linear;
  std::size_t n_side = 0;  // planar only: n_elements == n_side * n_side

  static ArrayGeometry linear(std::size_t n, double spacing = 0.5);
  static ArrayGeometry planar(std::size_t n_side, double spacing = 0.5);

  /// Throws InvalidArgument on a broken invariant.
  void validate() const;
};

struct Direction {
  double theta_deg = 0.0;
  double phi_deg = 0.0;
};

/// M directions sampled uniformly, both endpoints included. A single step
/// sits at the start angles. phi is only meaningful for planar arrays.
struct ScanPlan {
  std::size_t m_steps = 1;
  double theta_start_deg = 0.0;
  double theta_end_deg = 0.0;
  double phi_start_deg = 0.0;
  double phi_end_deg = 0.0;

  void validate() const;
  std::vector<Direction> directions() const;
};

/// Concatenated directions of several plans, in order.
std::vector<Direction> concat_directions(std::span<const ScanPlan> plans);

struct PhaseMatrix {
  RMatrix values;  // M x N radians, wrapped to (-pi, pi]

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

struct WeightMatrix {
  CMatrix values;  // M x N
  std::vector<double> amplitude_profile;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

double wrap_radians(double rad);  // to (-pi, pi]
double wrap_degrees(double deg);  // to (-180, 180]

/// Cascaded angle-offset group: base + k*step for k = 0..n-1, wrapped.
std::vector<double> cao_phase_offsets(std::size_t n, double base_deg, double step_deg);

/// Element n = sum_g sqrt(ratio_g) * exp(j*group_g[n]), group phases in degrees.
std::vector<Complex> combine_weighted_groups(std::span<const std::vector<double>> groups,
                                             std::span<const double> ratios);

/// Inter-element phase step 2*pi*spacing*sin(theta), radians.
double delta_phi(double theta_deg, double spacing);

/// Planar steps along the two grid axes for direction (theta, phi).
struct PlanarStep {
  double along_rows = 0.0;  // i axis: 2*pi*d*sin(theta)*cos(phi)
  double along_cols = 0.0;  // j axis: 2*pi*d*sin(theta)*sin(phi)
};
PlanarStep planar_delta_phi(Direction dir, double spacing);

/// Unwrapped phase of element `n` (flattened index for planar) toward `dir`.
double element_phase(const ArrayGeometry& geometry, std::size_t n, Direction dir);

PhaseMatrix build_phase_matrix(const ArrayGeometry& geometry, const ScanPlan& plan);
PhaseMatrix build_phase_matrix_2d(const ArrayGeometry& geometry, const ScanPlan& plan);

/// Layout-dispatching variant over an explicit direction list.
PhaseMatrix build_phase_matrix(const ArrayGeometry& geometry, std::span<const Direction> directions);

WeightMatrix build_weight_matrix(const PhaseMatrix& phases, std::span<const double> amplitude_profile);
WeightMatrix build_weight_matrix(const PhaseMatrix& phases);  // uniform unit amplitude

}  // namespace rcsteer
