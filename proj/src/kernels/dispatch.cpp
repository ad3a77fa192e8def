#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"
#include "rcsteer/error.hpp"

namespace rcsteer::kernels {

#if !defined(RCSTEER_HAVE_AVX2)
const KernelTable* detail::avx2_table() { return nullptr; }
#endif
#if !defined(RCSTEER_HAVE_NEON)
const KernelTable* detail::neon_table() { return nullptr; }
#endif

const KernelTable* avx2() {
#if defined(RCSTEER_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon() { return detail::neon_table(); }

namespace {

const KernelTable& select() {
  const char* env = std::getenv("RCSTEER_SIMD");
  const std::string_view want = env ? env : "auto";
  if (want == "scalar") return scalar();
  if (want == "avx2" && avx2()) return *avx2();
  if (want == "neon" && neon()) return *neon();
  if (avx2()) return *avx2();
  if (neon()) return *neon();
  return scalar();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> tables{&scalar()};
  if (avx2()) tables.push_back(avx2());
  if (neon()) tables.push_back(neon());
  return tables;
}

RowPointers::RowPointers(const SplitRows& rows) : length(rows.length()) {
  re.reserve(rows.rows());
  im.reserve(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    re.push_back(rows.re_row(r));
    im.push_back(rows.im_row(r));
  }
}

RowPointers::RowPointers(const SplitRows& rows, std::span<const std::size_t> subset)
    : length(rows.length()) {
  re.reserve(subset.size());
  im.reserve(subset.size());
  for (std::size_t r : subset) {
    if (r >= rows.rows()) throw DimensionError("row pointer subset index out of range");
    re.push_back(rows.re_row(r));
    im.push_back(rows.im_row(r));
  }
}

void weighted_sum(std::span<const std::complex<double>> coeffs, const RowPointers& rows,
                  std::span<double> out_re, std::span<double> out_im) {
  if (coeffs.size() != rows.re.size()) throw DimensionError("weighted_sum: coefficient count != row count");
  if (out_re.size() != rows.length || out_im.size() != rows.length)
    throw DimensionError("weighted_sum: output length != row length");
  active().weighted_sum(coeffs.data(), rows.view(), out_re.data(), out_im.data());
}

void weighted_sum_abs(std::span<const std::complex<double>> coeffs, const RowPointers& rows,
                      std::span<double> out) {
  if (coeffs.size() != rows.re.size())
    throw DimensionError("weighted_sum_abs: coefficient count != row count");
  if (out.size() != rows.length) throw DimensionError("weighted_sum_abs: output length != row length");
  active().weighted_sum_abs(coeffs.data(), rows.view(), out.data());
}

std::size_t argmax(std::span<const double> values) { return active().argmax(values.data(), values.size()); }

}  // namespace rcsteer::kernels
