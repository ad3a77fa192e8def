#pragma once

// Full complex SVD of a weight matrix and rank truncation.

#include <cstddef>
#include <variant>
#include <vector>

#include "rcsteer/types.hpp"

namespace rcsteer {

struct TruncatedSvd {
  CMatrix u;                  // M x M unitary
  std::vector<double> sigma;  // min(M, N) values, descending, >= 0
  CMatrix v;                  // N x N unitary
  std::size_t retained_rank = 0;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(u.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(v.rows()); }
};

struct FixedRank {
  std::size_t rank = 1;
};
struct Threshold {
  double epsilon = 0.0;  // absolute singular-value floor; values below are zeroed
};
struct EnergyFraction {
  double fraction = 1.0;  // smallest rank whose energy reaches this fraction
};
using TruncationPolicy = std::variant<FixedRank, Threshold, EnergyFraction>;

/// How singular values are weighted when measuring captured energy.
/// SquaredSigma is sum(s_i^2) (Frobenius energy); Sigma is sum(s_i).
enum class EnergyMeasure { SquaredSigma, Sigma };

inline constexpr double kNumericalRankFloor = 1e-12;

/// retained_rank is initialised to the count of sigma > 1e-12 * sigma[0].
TruncatedSvd svd(const CMatrix& a);

void validate(const TruncationPolicy& policy);

/// Rank chosen by `policy` for this decomposition. FixedRank beyond
/// min(M, N) throws InvalidArgument.
std::size_t rank_for(const TruncatedSvd& svd, const TruncationPolicy& policy,
                     EnergyMeasure measure = EnergyMeasure::SquaredSigma);

struct Compression {
  CMatrix matrix;  // B = U * diag(sigma truncated) * V^H
  std::size_t rank = 0;
};

Compression truncate(const TruncatedSvd& svd, const TruncationPolicy& policy,
                     EnergyMeasure measure = EnergyMeasure::SquaredSigma);

/// Share of the spectrum carried by the first r singular values.
double energy_fraction(const TruncatedSvd& svd, std::size_t r,
                       EnergyMeasure measure = EnergyMeasure::SquaredSigma);

/// ||A - B||_F
double reconstruction_error(const CMatrix& a, const CMatrix& b);

}  // namespace rcsteer
