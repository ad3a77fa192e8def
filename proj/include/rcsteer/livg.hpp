#pragma once

// Linear independent vector group (LIVG) selection and the per-direction
// combination coefficients K such that  target ~= sum_r K[r] * livg_row[r].

#include <cstddef>
#include <span>
#include <vector>

#include "rcsteer/types.hpp"

namespace rcsteer {

inline constexpr double kIndependenceTolerance = 1e-9;

struct Livg {
  std::vector<std::size_t> row_indices;
  CMatrix rows;  // R x N, rows(r, :) = B(row_indices[r], :)

  std::size_t rank() const noexcept { return row_indices.size(); }
  std::size_t n_elements() const noexcept { return static_cast<std::size_t>(rows.cols()); }
};

struct KVector {
  CVector coefficients;
  double residual = 0.0;  // || sum_r k_r c_r - target ||_2
};

/// Numerical rank of `m` at `rel_tol` times its largest singular value.
std::size_t numerical_rank(const CMatrix& m, double rel_tol = kIndependenceTolerance);

/// Throws SelectionError on duplicate/out-of-range indices and
/// DependenceError when the rows are not independent.
Livg select_livg(const CMatrix& b, std::span<const std::size_t> row_indices);

/// round(linspace(0, m-1, r)); distinct whenever r <= m.
std::vector<std::size_t> equally_spaced_indices(std::size_t m, std::size_t r);

/// Least-squares solver bound to one LIVG. The pseudoinverse is formed once,
/// so solving many directions against the same group is cheap.
class KSolver {
 public:
  explicit KSolver(const Livg& livg);

  KVector solve(const CVector& target) const;

  /// One KVector per row of `targets` (M x N).
  std::vector<KVector> solve_rows(const CMatrix& targets) const;

  std::size_t rank() const noexcept { return static_cast<std::size_t>(basis_.cols()); }

 private:
  CMatrix basis_;  // N x R, columns are LIVG rows
  CMatrix pinv_;   // R x N
};

KVector solve_k(const Livg& livg, const CVector& target);

/// sum_r k.coefficients[r] * livg.rows(r, :)
CVector reconstruct_row(const Livg& livg, const KVector& k);

double max_k_magnitude(const KVector& k);

}  // namespace rcsteer
