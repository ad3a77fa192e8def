#include "rcsteer/compression.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "rcsteer/error.hpp"

namespace rcsteer {

TruncatedSvd svd(const CMatrix& a) {
  if (a.size() == 0) throw InvalidArgument("svd: empty matrix");
  if (!a.allFinite()) throw NumericError("svd: matrix contains non-finite entries");

  Eigen::BDCSVD<CMatrix> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (dec.info() != Eigen::Success) throw NumericError("svd: decomposition failed");

  TruncatedSvd out;
  out.u = dec.matrixU();
  out.v = dec.matrixV();
  const auto& s = dec.singularValues();
  out.sigma.assign(s.data(), s.data() + s.size());
  for (double& x : out.sigma) x = std::max(x, 0.0);

  const double floor = out.sigma.empty() ? 0.0 : kNumericalRankFloor * out.sigma.front();
  out.retained_rank = static_cast<std::size_t>(
      std::count_if(out.sigma.begin(), out.sigma.end(), [floor](double x) { return x > floor; }));
  return out;
}

void validate(const TruncationPolicy& policy) {
  std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FixedRank>) {
          if (p.rank < 1) throw InvalidArgument("truncation: fixed rank must be >= 1");
        } else if constexpr (std::is_same_v<P, Threshold>) {
          if (!(p.epsilon >= 0.0)) throw InvalidArgument("truncation: threshold epsilon must be >= 0");
        } else {
          if (!(p.fraction > 0.0 && p.fraction <= 1.0))
            throw InvalidArgument("truncation: energy fraction must lie in (0, 1]");
        }
      },
      policy);
}

std::size_t rank_for(const TruncatedSvd& svd, const TruncationPolicy& policy, EnergyMeasure measure) {
  validate(policy);
  const std::size_t full = svd.sigma.size();
  if (const auto* fixed = std::get_if<FixedRank>(&policy)) {
    if (fixed->rank > full)
      throw InvalidArgument("truncation: fixed rank " + std::to_string(fixed->rank) + " exceeds min(M, N) = " +
                            std::to_string(full));
    return fixed->rank;
  }
  if (const auto* thr = std::get_if<Threshold>(&policy)) {
    // descending order: everything from the first value below epsilon on is dropped
    std::size_t r = 0;
    while (r < full && !(svd.sigma[r] < thr->epsilon)) ++r;
    return r;
  }
  const double target = std::get<EnergyFraction>(policy).fraction;
  for (std::size_t r = 1; r <= full; ++r) {
    if (energy_fraction(svd, r, measure) >= target) return r;
  }
  return full;
}

Compression truncate(const TruncatedSvd& svd, const TruncationPolicy& policy, EnergyMeasure measure) {
  const std::size_t r = rank_for(svd, policy, measure);
  const auto m = svd.u.rows();
  const auto n = svd.v.rows();
  Compression out{CMatrix::Zero(m, n), r};
  if (r == 0) return out;
  const auto rr = static_cast<Eigen::Index>(r);
  Eigen::VectorXd s(rr);
  for (Eigen::Index i = 0; i < rr; ++i) s(i) = svd.sigma[static_cast<std::size_t>(i)];
  out.matrix = svd.u.leftCols(rr) * s.asDiagonal() * svd.v.leftCols(rr).adjoint();
  return out;
}

double energy_fraction(const TruncatedSvd& svd, std::size_t r, EnergyMeasure measure) {
  if (r > svd.sigma.size())
    throw InvalidArgument("energy_fraction: rank " + std::to_string(r) + " exceeds spectrum length");
  auto weight = [measure](double s) { return measure == EnergyMeasure::SquaredSigma ? s * s : s; };
  double head = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < svd.sigma.size(); ++i) {
    const double w = weight(svd.sigma[i]);
    total += w;
    if (i < r) head += w;
  }
  if (!(total > 0.0)) throw NumericError("energy_fraction: undefined for an all-zero spectrum");
  if (r == svd.sigma.size()) return 1.0;
  return head / total;
}

double reconstruction_error(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("reconstruction_error: shapes differ");
  return (a - b).norm();
}

}  // namespace rcsteer
