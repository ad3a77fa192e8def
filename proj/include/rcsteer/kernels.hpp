#pragma once

// Data-parallel inner loops. Every variant accumulates in the same order and
// avoids fused multiply-add, so all variants produce bitwise identical output.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace rcsteer::kernels {

/// Read-only view of `rows` complex rows of `length` samples, stored as
/// separate real and imaginary planes with row stride `stride`.
struct SplitRowsView {
  const double* re = nullptr;
  const double* im = nullptr;
  std::size_t rows = 0;
  std::size_t length = 0;
  std::size_t stride = 0;
};

/// Owning split-complex row storage.
class SplitRows {
 public:
  SplitRows() = default;
  SplitRows(std::size_t rows, std::size_t length)
      : rows_(rows), length_(length), re_(rows * length, 0.0), im_(rows * length, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t length() const noexcept { return length_; }

  double* re_row(std::size_t r) noexcept { return re_.data() + r * length_; }
  double* im_row(std::size_t r) noexcept { return im_.data() + r * length_; }
  const double* re_row(std::size_t r) const noexcept { return re_.data() + r * length_; }
  const double* im_row(std::size_t r) const noexcept { return im_.data() + r * length_; }

  void set(std::size_t r, std::size_t i, std::complex<double> z) noexcept {
    re_[r * length_ + i] = z.real();
    im_[r * length_ + i] = z.imag();
  }
  std::complex<double> at(std::size_t r, std::size_t i) const noexcept {
    return {re_[r * length_ + i], im_[r * length_ + i]};
  }

  SplitRowsView view() const noexcept { return {re_.data(), im_.data(), rows_, length_, length_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t length_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

/// Gathered view: rows picked by pointer, used to combine a subset of rows
/// without copying them.
struct GatheredRowsView {
  const double* const* re = nullptr;
  const double* const* im = nullptr;
  std::size_t rows = 0;
  std::size_t length = 0;
};

struct KernelTable {
  std::string_view name;

  // out[i] = sum_r coeffs[r] * row_r[i]
  void (*weighted_sum)(const std::complex<double>* coeffs, GatheredRowsView rows, double* out_re,
                       double* out_im);

  // out[i] = | sum_r coeffs[r] * row_r[i] |
  void (*weighted_sum_abs)(const std::complex<double>* coeffs, GatheredRowsView rows, double* out);

  // index of the first maximum; 0 for empty input
  std::size_t (*argmax)(const double* values, std::size_t n);
};

const KernelTable& scalar();

/// AVX2 table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2();

/// NEON table, or nullptr when not compiled in.
const KernelTable* neon();

/// Best available table. RCSTEER_SIMD=scalar|avx2|neon in the environment
/// pins the choice (unknown or unavailable values fall back to auto).
const KernelTable& active();

/// All tables usable on this machine, scalar first.
std::vector<const KernelTable*> available();

// Convenience wrappers over active().

/// Pointer arrays for a contiguous SplitRows block (or a subset of its rows).
struct RowPointers {
  std::vector<const double*> re;
  std::vector<const double*> im;
  std::size_t length = 0;

  RowPointers() = default;
  explicit RowPointers(const SplitRows& rows);
  RowPointers(const SplitRows& rows, std::span<const std::size_t> subset);

  GatheredRowsView view() const noexcept { return {re.data(), im.data(), re.size(), length}; }
};

void weighted_sum(std::span<const std::complex<double>> coeffs, const RowPointers& rows,
                  std::span<double> out_re, std::span<double> out_im);
void weighted_sum_abs(std::span<const std::complex<double>> coeffs, const RowPointers& rows,
                      std::span<double> out);
std::size_t argmax(std::span<const double> values);

}  // namespace rcsteer::kernels
