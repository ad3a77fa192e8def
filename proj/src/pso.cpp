#include "rcsteer/pso.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rcsteer/error.hpp"
#include "rcsteer/parallel.hpp"

namespace rcsteer {

void PsoConfig::validate() const {
  if (swarm_size < 2) throw InvalidArgument("pso: swarm_size must be >= 2");
  if (iterations < 1) throw InvalidArgument("pso: iterations must be >= 1");
  if (!(inertia >= 0.0 && inertia <= 1.0)) throw InvalidArgument("pso: inertia must lie in [0, 1]");
  if (!(cognitive >= 0.0) || !(social >= 0.0)) throw InvalidArgument("pso: cognitive and social must be >= 0");
  if (v_max && !(*v_max > 0.0)) throw InvalidArgument("pso: v_max must be > 0");
  if (!(k_bound > 0.0)) throw InvalidArgument("pso: k_bound must be > 0");
  if (!(penalty_weight >= 0.0)) throw InvalidArgument("pso: penalty_weight must be >= 0");
}

double PsoConfig::effective_v_max(std::size_t m_steps) const {
  return v_max ? *v_max : std::max(1.0, static_cast<double>(m_steps) / 10.0);
}

// ---- objective -----------------------------------------------------------

ObjectiveContext::ObjectiveContext(CMatrix ideal, CMatrix compressed, ArrayGeometry geometry,
                                   std::vector<Direction> directions, AngleGrid grid, ObjectiveWeights weights)
    : ideal_(std::move(ideal)),
      compressed_(std::move(compressed)),
      geometry_(geometry),
      directions_(std::move(directions)),
      grid_(grid.samples()),
      weights_(weights) {
  geometry_.validate();
  if (ideal_.rows() != compressed_.rows() || ideal_.cols() != compressed_.cols())
    throw DimensionError("objective context: ideal and compressed matrices differ in shape");
  if (static_cast<std::size_t>(ideal_.cols()) != geometry_.n_elements)
    throw DimensionError("objective context: matrix width != element count");
  if (directions_.size() != static_cast<std::size_t>(ideal_.rows()))
    throw DimensionError("objective context: direction count != matrix rows");
  if (ideal_.rows() == 0) throw InvalidArgument("objective context: no directions");

  if (geometry_.layout == Layout::Linear) {
    steering_.emplace(geometry_, grid_);
    row_patterns_ = steering_->row_patterns(compressed_);
  } else {
    planar_.emplace(geometry_, grid.step_deg);
  }

  ideal_pointing_.reserve(directions_.size());
  std::vector<Complex> row(n_elements());
  for (Eigen::Index m = 0; m < ideal_.rows(); ++m) {
    for (std::size_t n = 0; n < row.size(); ++n) row[n] = ideal_(m, static_cast<Eigen::Index>(n));
    ideal_pointing_.push_back(point(row));
  }
}

ObjectiveContext::Pointing ObjectiveContext::point(std::span<const Complex> weights) const {
  if (steering_) {
    std::vector<double> af(grid_.size());
    steering_->magnitudes(weights, af);
    const auto lobe = main_lobe(grid_, af);
    return {lobe.pointing_deg, 0.0, lobe.mainlobe_mag};
  }
  const auto p = planar_->find(weights);
  return {p.theta_deg, p.phi_deg, p.magnitude};
}

double ObjectiveContext::direction_cost(const Pointing& ideal, const Pointing& recon) const {
  const double amp_ideal = ideal.magnitude > 0.0 ? 1.0 : 0.0;
  const double amp_recon = ideal.magnitude > 0.0 ? recon.magnitude / ideal.magnitude : recon.magnitude;
  const double angle = steering_ ? std::abs(ideal.theta_deg - recon.theta_deg)
                                 : angular_separation_deg({ideal.theta_deg, ideal.phi_deg},
                                                          {recon.theta_deg, recon.phi_deg});
  return weights_.amp * std::abs(amp_ideal - amp_recon) + weights_.angle * angle;
}

SelectionScore ObjectiveContext::finish(double base_sum, double max_k, Penalty penalty) const {
  SelectionScore s;
  s.base = base_sum / (2.0 * static_cast<double>(m_steps()));
  s.max_k = max_k;
  s.objective = s.base + penalty.weight * std::max(0.0, max_k - penalty.k_bound);
  return s;
}

namespace {

std::optional<Livg> try_select(const CMatrix& b, std::span<const std::size_t> indices) {
  try {
    return select_livg(b, indices);
  } catch (const DependenceError&) {
    return std::nullopt;
  } catch (const SelectionError&) {
    return std::nullopt;
  }
}

SelectionScore dependent_score() {
  SelectionScore s;
  s.objective = kDependencePenalty;
  s.base = kDependencePenalty;
  s.dependent = true;
  return s;
}

}  // namespace

SelectionScore ObjectiveContext::evaluate(std::span<const std::size_t> indices, Penalty penalty) const {
  if (!steering_) return evaluate_direct(indices, penalty);
  const auto livg = try_select(compressed_, indices);
  if (!livg) return dependent_score();

  const KSolver solver(*livg);
  const kernels::RowPointers basis(row_patterns_, indices);
  std::vector<double> af(grid_.size());
  std::vector<Complex> coeffs(indices.size());
  double base_sum = 0.0;
  double max_k = 0.0;
  for (Eigen::Index m = 0; m < compressed_.rows(); ++m) {
    const auto k = solver.solve(compressed_.row(m).transpose());
    max_k = std::max(max_k, max_k_magnitude(k));
    for (std::size_t r = 0; r < coeffs.size(); ++r) coeffs[r] = k.coefficients(static_cast<Eigen::Index>(r));
    kernels::weighted_sum_abs(coeffs, basis, af);
    const auto lobe = main_lobe(grid_, af);
    base_sum += direction_cost(ideal_pointing_[static_cast<std::size_t>(m)],
                               {lobe.pointing_deg, 0.0, lobe.mainlobe_mag});
  }
  return finish(base_sum, max_k, penalty);
}

SelectionScore ObjectiveContext::evaluate_direct(std::span<const std::size_t> indices, Penalty penalty) const {
  const auto livg = try_select(compressed_, indices);
  if (!livg) return dependent_score();

  const KSolver solver(*livg);
  std::vector<Complex> weights(n_elements());
  double base_sum = 0.0;
  double max_k = 0.0;
  for (Eigen::Index m = 0; m < compressed_.rows(); ++m) {
    const auto k = solver.solve(compressed_.row(m).transpose());
    max_k = std::max(max_k, max_k_magnitude(k));
    const CVector w = reconstruct_row(*livg, k);
    for (std::size_t n = 0; n < weights.size(); ++n) weights[n] = w(static_cast<Eigen::Index>(n));
    base_sum += direction_cost(ideal_pointing_[static_cast<std::size_t>(m)], point(weights));
  }
  return finish(base_sum, max_k, penalty);
}

double objective(std::span<const std::size_t> indices, const ObjectiveContext& ctx, Penalty penalty) {
  return ctx.evaluate(indices, penalty).objective;
}

// ---- swarm ---------------------------------------------------------------

Selection repair_position(std::span<const double> raw, std::size_t m_steps) {
  if (raw.size() > m_steps)
    throw InvalidArgument("repair_position: rank " + std::to_string(raw.size()) + " exceeds " +
                          std::to_string(m_steps) + " available rows");
  const auto last = static_cast<long long>(m_steps) - 1;
  std::vector<bool> used(m_steps, false);
  Selection out;
  out.reserve(raw.size());
  for (double x : raw) {
    const double clipped = std::isfinite(x) ? std::clamp(x, 0.0, static_cast<double>(last)) : 0.0;
    const long long want = std::llround(clipped);
    long long pick = want;
    for (long long step = 1; used[static_cast<std::size_t>(pick)]; ++step) {
      // alternate +step, -step; skip candidates outside the index range
      if (want + step <= last && !used[static_cast<std::size_t>(want + step)]) {
        pick = want + step;
      } else if (want - step >= 0 && !used[static_cast<std::size_t>(want - step)]) {
        pick = want - step;
      }
    }
    used[static_cast<std::size_t>(pick)] = true;
    out.push_back(static_cast<std::size_t>(pick));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

double unit_draw(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::mt19937_64 particle_stream(std::uint64_t seed, std::size_t particle) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(particle), 0x5eedu};
  return std::mt19937_64(seq);
}

std::vector<Selection> repair_all(const PsoState& state) {
  std::vector<Selection> out;
  out.reserve(state.positions.size());
  for (const auto& x : state.positions) out.push_back(repair_position(x, state.m_steps));
  return out;
}

}  // namespace

BatchObjective batch_objective(const ObjectiveContext& ctx, Penalty penalty, std::size_t threads) {
  return [&ctx, penalty, threads](const std::vector<Selection>& batch) {
    std::vector<double> out(batch.size());
    parallel_for(batch.size(), threads, [&](std::size_t i) { out[i] = ctx.evaluate(batch[i], penalty).objective; });
    return out;
  };
}

PsoState pso_init(std::size_t m_steps, std::size_t rank, const PsoConfig& config, const BatchObjective& objective) {
  config.validate();
  if (rank < 1 || rank > m_steps)
    throw InvalidArgument("pso: rank " + std::to_string(rank) + " infeasible for " + std::to_string(m_steps) +
                          " rows");
  PsoState s;
  s.m_steps = m_steps;
  const double hi = static_cast<double>(m_steps - 1);
  for (std::size_t i = 0; i < config.swarm_size; ++i) {
    s.streams.push_back(particle_stream(config.seed, i));
    std::vector<double> x(rank);
    for (double& xi : x) xi = unit_draw(s.streams.back()) * hi;
    s.positions.push_back(x);
    s.velocities.emplace_back(rank, 0.0);
  }
  s.pbest_positions = s.positions;
  s.pbest_objective = objective(repair_all(s));
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.pbest_objective.size(); ++i) {
    if (s.pbest_objective[i] < s.pbest_objective[best]) best = i;
  }
  s.gbest_position = s.pbest_positions[best];
  s.gbest_selection = repair_position(s.gbest_position, m_steps);
  s.gbest_objective = s.pbest_objective[best];
  return s;
}

PsoState pso_step(PsoState state, const PsoConfig& config, const BatchObjective& objective) {
  const double v_max = config.effective_v_max(state.m_steps);
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    auto& x = state.positions[i];
    auto& v = state.velocities[i];
    const auto& pb = state.pbest_positions[i];
    auto& gen = state.streams[i];
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double r1 = unit_draw(gen);
      const double r2 = unit_draw(gen);
      double vel = config.inertia * v[d] + config.cognitive * r1 * (pb[d] - x[d]) +
                   config.social * r2 * (state.gbest_position[d] - x[d]);
      vel = std::clamp(vel, -v_max, v_max);
      v[d] = vel;
      x[d] += vel;
    }
  }

  const auto scores = objective(repair_all(state));
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] < state.pbest_objective[i]) {
      state.pbest_objective[i] = scores[i];
      state.pbest_positions[i] = state.positions[i];
    }
  }
  for (std::size_t i = 0; i < state.pbest_objective.size(); ++i) {
    if (state.pbest_objective[i] < state.gbest_objective) {
      state.gbest_objective = state.pbest_objective[i];
      state.gbest_position = state.pbest_positions[i];
      state.gbest_selection = repair_position(state.gbest_position, state.m_steps);
    }
  }
  ++state.iteration;
  return state;
}

PsoState pso_step(PsoState state, const PsoConfig& config, const ObjectiveContext& ctx) {
  return pso_step(std::move(state), config, batch_objective(ctx, config.penalty(), config.threads));
}

PsoResult optimize(const ObjectiveContext& ctx, const PsoConfig& config, std::size_t rank) {
  config.validate();
  const std::size_t m = ctx.m_steps();
  if (rank < 1 || rank > m || rank > ctx.n_elements())
    throw InvalidArgument("pso: rank " + std::to_string(rank) + " infeasible (need 1 <= rank <= min(M, N) = " +
                          std::to_string(std::min(m, ctx.n_elements())) + ")");

  // Memoised scoring: the swarm revisits the same repaired selections often.
  std::map<Selection, double> cache;
  const Penalty penalty = config.penalty();
  BatchObjective cached = [&](const std::vector<Selection>& batch) {
    std::vector<Selection> missing;
    for (const auto& sel : batch) {
      if (!cache.contains(sel) && std::find(missing.begin(), missing.end(), sel) == missing.end())
        missing.push_back(sel);
    }
    std::vector<double> fresh(missing.size());
    parallel_for(missing.size(), config.threads,
                 [&](std::size_t i) { fresh[i] = ctx.evaluate(missing[i], penalty).objective; });
    for (std::size_t i = 0; i < missing.size(); ++i) cache.emplace(missing[i], fresh[i]);
    std::vector<double> out;
    out.reserve(batch.size());
    for (const auto& sel : batch) out.push_back(cache.at(sel));
    return out;
  };

  PsoResult result;
  auto state = pso_init(m, rank, config, cached);
  result.history.push_back(state.gbest_objective);
  for (std::size_t t = 0; t < config.iterations; ++t) {
    state = pso_step(std::move(state), config, cached);
    result.history.push_back(state.gbest_objective);
  }
  result.evaluations = cache.size();

  const auto score = ctx.evaluate(state.gbest_selection, penalty);
  if (score.dependent) {
    throw DependenceError("pso: no linearly independent selection of rank " + std::to_string(rank) + " found",
                          numerical_rank(ctx.compressed()), rank);
  }
  result.livg = select_livg(ctx.compressed(), state.gbest_selection);
  result.k_table = KSolver(result.livg).solve_rows(ctx.compressed());
  result.objective = state.gbest_objective;
  result.max_k = score.max_k;
  result.constraint_satisfied = score.max_k < config.k_bound;
  return result;
}

}  // namespace rcsteer
