#pragma once

// Particle swarm search over LIVG row selections.
//
// Positions are continuous row-index coordinates; each evaluation first
// repairs a position into R distinct sorted row indices. The objective is the
// mean main-lobe magnitude and pointing discrepancy between ideal and
// LIVG-reconstructed patterns, plus an exterior penalty on max|K|.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "rcsteer/array_model.hpp"
#include "rcsteer/farfield.hpp"
#include "rcsteer/kernels.hpp"
#include "rcsteer/livg.hpp"
#include "rcsteer/types.hpp"

namespace rcsteer {

using Selection = std::vector<std::size_t>;

struct ObjectiveWeights {
  double amp = 1.0;    // weight on |Amp_ideal - Amp_recon| (linear, ideal-peak normalised)
  double angle = 1.0;  // weight on |Angle_ideal - Angle_recon| (degrees)
};

struct Penalty {
  double k_bound = 20.0;
  double weight = 10.0;
};

/// Cost assigned to selections whose rows are linearly dependent.
inline constexpr double kDependencePenalty = 1e6;

struct PsoConfig {
  std::size_t swarm_size = 50;
  std::size_t iterations = 200;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  std::optional<double> v_max;  // index units; default M / 10
  double k_bound = 20.0;
  double penalty_weight = 10.0;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0 = hardware concurrency

  void validate() const;
  double effective_v_max(std::size_t m_steps) const;
  Penalty penalty() const { return {k_bound, penalty_weight}; }
};

struct SelectionScore {
  double objective = 0.0;  // base + penalty
  double base = 0.0;       // averaged magnitude + pointing discrepancy
  double max_k = 0.0;
  bool dependent = false;
};

/// Everything the objective needs, precomputed once: ideal main lobes and,
/// for linear arrays, the complex pattern of every compressed row so a
/// reconstructed pattern is sum_r k_r * pattern(row_r).
class ObjectiveContext {
 public:
  ObjectiveContext(CMatrix ideal, CMatrix compressed, ArrayGeometry geometry, std::vector<Direction> directions,
                   AngleGrid grid, ObjectiveWeights weights = {});

  SelectionScore evaluate(std::span<const std::size_t> indices, Penalty penalty = {}) const;

  /// Same objective computed from reconstructed weights directly (no
  /// row-pattern shortcut). Slower; used to cross-check the fast path.
  SelectionScore evaluate_direct(std::span<const std::size_t> indices, Penalty penalty = {}) const;

  std::size_t m_steps() const noexcept { return static_cast<std::size_t>(compressed_.rows()); }
  std::size_t n_elements() const noexcept { return static_cast<std::size_t>(compressed_.cols()); }
  const CMatrix& ideal() const noexcept { return ideal_; }
  const CMatrix& compressed() const noexcept { return compressed_; }
  const ArrayGeometry& geometry() const noexcept { return geometry_; }
  const std::vector<Direction>& directions() const noexcept { return directions_; }
  const std::vector<double>& grid() const noexcept { return grid_; }

 private:
  struct Pointing {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    double magnitude = 0.0;
  };

  Pointing point(std::span<const Complex> weights) const;
  double direction_cost(const Pointing& ideal, const Pointing& recon) const;
  SelectionScore finish(double base_sum, double max_k, Penalty penalty) const;

  CMatrix ideal_;
  CMatrix compressed_;
  ArrayGeometry geometry_;
  std::vector<Direction> directions_;
  std::vector<double> grid_;
  ObjectiveWeights weights_;
  std::optional<SteeringTable> steering_;  // linear
  kernels::SplitRows row_patterns_;         // linear: M x G
  std::optional<PlanarSearch> planar_;      // planar
  std::vector<Pointing> ideal_pointing_;
};

double objective(std::span<const std::size_t> indices, const ObjectiveContext& ctx, Penalty penalty = {});

/// Clip to [0, M-1], round, step duplicates to the nearest free index
/// (+1, -1, +2, -2, ...), sort ascending.
Selection repair_position(std::span<const double> raw, std::size_t m_steps);

struct PsoState {
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> velocities;
  std::vector<std::vector<double>> pbest_positions;
  std::vector<double> pbest_objective;
  std::vector<double> gbest_position;
  Selection gbest_selection;
  double gbest_objective = 0.0;
  std::size_t iteration = 0;
  std::size_t m_steps = 0;
  std::vector<std::mt19937_64> streams;  // one per particle
};

/// Scores a batch of repaired selections, one value per selection.
using BatchObjective = std::function<std::vector<double>(const std::vector<Selection>&)>;

BatchObjective batch_objective(const ObjectiveContext& ctx, Penalty penalty, std::size_t threads = 0);

/// Uniform positions over [0, M-1], zero velocities, evaluated once.
PsoState pso_init(std::size_t m_steps, std::size_t rank, const PsoConfig& config, const BatchObjective& objective);

PsoState pso_step(PsoState state, const PsoConfig& config, const BatchObjective& objective);
PsoState pso_step(PsoState state, const PsoConfig& config, const ObjectiveContext& ctx);

struct PsoResult {
  Livg livg;
  std::vector<KVector> k_table;  // one per direction, targets are compressed rows
  std::vector<double> history;   // gbest objective; entry 0 is the initial swarm
  double objective = 0.0;
  double max_k = 0.0;
  bool constraint_satisfied = false;  // max_k < k_bound
  std::size_t evaluations = 0;        // distinct selections scored
};

PsoResult optimize(const ObjectiveContext& ctx, const PsoConfig& config, std::size_t rank);

}  // namespace rcsteer
