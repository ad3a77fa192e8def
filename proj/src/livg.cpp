#include "rcsteer/livg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "rcsteer/error.hpp"

namespace rcsteer {

std::size_t numerical_rank(const CMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> dec(m);
  const auto& s = dec.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  const double floor = rel_tol * s(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > floor) ++r;
  }
  return r;
}

Livg select_livg(const CMatrix& b, std::span<const std::size_t> row_indices) {
  const auto m = static_cast<std::size_t>(b.rows());
  if (row_indices.empty()) throw SelectionError("select_livg: empty selection");
  std::vector<std::size_t> sorted(row_indices.begin(), row_indices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw SelectionError("select_livg: duplicate row index");
  if (sorted.back() >= m)
    throw SelectionError("select_livg: row index " + std::to_string(sorted.back()) + " outside [0, " +
                         std::to_string(m) + ")");

  Livg out;
  out.row_indices.assign(row_indices.begin(), row_indices.end());
  out.rows.resize(static_cast<Eigen::Index>(row_indices.size()), b.cols());
  for (std::size_t r = 0; r < row_indices.size(); ++r)
    out.rows.row(static_cast<Eigen::Index>(r)) = b.row(static_cast<Eigen::Index>(row_indices[r]));

  const std::size_t requested = row_indices.size();
  const std::size_t achieved = numerical_rank(out.rows);
  if (achieved < requested)
    throw DependenceError("select_livg: selected rows have numerical rank " + std::to_string(achieved) + " < " +
                              std::to_string(requested),
                          achieved, requested);
  return out;
}

std::vector<std::size_t> equally_spaced_indices(std::size_t m, std::size_t r) {
  if (r == 0 || r > m) throw InvalidArgument("equally_spaced_indices: need 1 <= r <= m");
  std::vector<std::size_t> out(r);
  if (r == 1) {
    out[0] = 0;
    return out;
  }
  const double step = static_cast<double>(m - 1) / static_cast<double>(r - 1);
  for (std::size_t k = 0; k < r; ++k) out[k] = static_cast<std::size_t>(std::llround(step * static_cast<double>(k)));
  return out;
}

KSolver::KSolver(const Livg& livg) : basis_(livg.rows.transpose()) {
  Eigen::JacobiSVD<CMatrix> dec(basis_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = dec.singularValues();
  const double floor = s.size() > 0 ? kIndependenceTolerance * s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > floor) inv(i) = 1.0 / s(i);
  }
  pinv_ = dec.matrixV() * inv.asDiagonal() * dec.matrixU().adjoint();
}

KVector KSolver::solve(const CVector& target) const {
  if (target.size() != basis_.rows())
    throw DimensionError("solve_k: target length " + std::to_string(target.size()) + " != element count " +
                         std::to_string(basis_.rows()));
  KVector out;
  out.coefficients = pinv_ * target;
  out.residual = (basis_ * out.coefficients - target).norm();
  return out;
}

std::vector<KVector> KSolver::solve_rows(const CMatrix& targets) const {
  if (targets.cols() != basis_.rows()) throw DimensionError("solve_rows: target width != element count");
  std::vector<KVector> out;
  out.reserve(static_cast<std::size_t>(targets.rows()));
  for (Eigen::Index m = 0; m < targets.rows(); ++m) out.push_back(solve(targets.row(m).transpose()));
  return out;
}

KVector solve_k(const Livg& livg, const CVector& target) { return KSolver(livg).solve(target); }

CVector reconstruct_row(const Livg& livg, const KVector& k) {
  if (static_cast<std::size_t>(k.coefficients.size()) != livg.rank())
    throw DimensionError("reconstruct_row: K length " + std::to_string(k.coefficients.size()) + " != LIVG rank " +
                         std::to_string(livg.rank()));
  return livg.rows.transpose() * k.coefficients;
}

double max_k_magnitude(const KVector& k) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < k.coefficients.size(); ++i) best = std::max(best, std::abs(k.coefficients(i)));
  return best;
}

}  // namespace rcsteer
