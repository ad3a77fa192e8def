#pragma once

// Array factor evaluation on angle grids and beam metrics.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rcsteer/array_model.hpp"
#include "rcsteer/kernels.hpp"
#include "rcsteer/types.hpp"

namespace rcsteer {

struct AngleGrid {
  double start_deg = -90.0;
  double end_deg = 90.0;
  double step_deg = 0.05;

  void validate() const;
  /// start + k*step for every k with sample <= end (1e-9 slack).
  std::vector<double> samples() const;
};

struct FarFieldPattern {
  std::vector<double> theta_grid_deg;
  std::vector<double> af_linear;  // |AF(theta)|
  std::vector<double> af_db;      // 20*log10(af / max), floored at kDbFloor

  std::size_t size() const noexcept { return af_linear.size(); }
};

inline constexpr double kDbFloor = -300.0;

/// Builds af_db from af_linear. An all-zero pattern maps to 0 dB everywhere.
FarFieldPattern make_pattern(std::vector<double> grid_deg, std::vector<double> af_linear);

struct MainLobe {
  double pointing_deg = 0.0;
  double mainlobe_mag = 0.0;
  std::size_t index = 0;
  bool degenerate = false;  // flat pattern, pointing is arbitrary
};

struct BeamMetrics {
  double pointing_deg = 0.0;
  double mainlobe_mag = 0.0;
  std::optional<double> psll_db;
  std::optional<double> pointing_error_deg;
  bool degenerate = false;
};

/// Element n = exp(+j * phase_n(theta, phi)). Planar arrays use the
/// flattened row-major element order.
CVector steering_vector(double theta_deg, const ArrayGeometry& geometry, double phi_deg = 0.0);

/// Steering vectors for a whole grid, stored element-major (N rows of G
/// samples) so one pattern is a weighted sum of rows. For planar arrays the
/// grid is a cut at fixed phi; negative theta points along phi + 180.
class SteeringTable {
 public:
  SteeringTable(const ArrayGeometry& geometry, std::vector<double> grid_deg, double phi_deg = 0.0);

  const std::vector<double>& grid() const noexcept { return grid_; }
  std::size_t n_elements() const noexcept { return table_.rows(); }

  void magnitudes(std::span<const Complex> weights, std::span<double> out) const;
  FarFieldPattern pattern(std::span<const Complex> weights) const;

  /// Complex pattern of every row of `weights` (R x N) -> R x G.
  kernels::SplitRows row_patterns(const CMatrix& weights) const;

 private:
  std::vector<double> grid_;
  kernels::SplitRows table_;
};

FarFieldPattern array_factor(std::span<const Complex> weights, std::span<const double> grid_deg,
                             const ArrayGeometry& geometry, double phi_deg = 0.0);

/// Global maximum of af_linear; ties resolve to the smaller angle.
MainLobe main_lobe(const FarFieldPattern& pattern);
MainLobe main_lobe(std::span<const double> grid_deg, std::span<const double> af_linear);

/// Main lobe = samples around the peak down to the first local minimum on
/// each side. Returns the highest af_db outside it, or nullopt when nothing
/// lies outside.
std::optional<double> peak_sidelobe_level(const FarFieldPattern& pattern);

BeamMetrics beam_metrics(const FarFieldPattern& pattern, std::optional<double> reference_deg = std::nullopt);

/// Mean of |ideal.pointing - recon.pointing|.
double pointing_mae(std::span<const BeamMetrics> ideal, std::span<const BeamMetrics> recon);

// ---- planar arrays -------------------------------------------------------

struct PlanarPointing {
  double theta_deg = 0.0;  // [0, 90]
  double phi_deg = 0.0;    // (-180, 180]
  double magnitude = 0.0;
};

/// Two-stage hemisphere search for the (theta, phi) of the global maximum:
/// a coarse grid, then a fine grid within +-1.5 coarse steps of the coarse peak.
class PlanarSearch {
 public:
  PlanarSearch(const ArrayGeometry& geometry, double fine_step_deg, double coarse_step_deg = 1.0);

  PlanarPointing find(std::span<const Complex> weights) const;

 private:
  ArrayGeometry geometry_;
  double fine_step_;
  double coarse_step_;
  std::vector<Direction> coarse_points_;
  kernels::SplitRows coarse_table_;
};

/// Great-circle angle between two directions, degrees.
double angular_separation_deg(Direction a, Direction b);

}  // namespace rcsteer
