#include "kernels_internal.hpp"

#include <immintrin.h>

#include <cmath>

namespace rcsteer::kernels {
namespace {

// Mirrors the scalar accumulation order: per output sample, rows are added
// in index order, each term formed as (a*b - c*d) without FMA.

void weighted_sum_avx2(const std::complex<double>* coeffs, GatheredRowsView rows, double* out_re,
                       double* out_im) {
  const std::size_t n = rows.length;
  const std::size_t vec_end = n - n % 4;
  for (std::size_t i = 0; i < vec_end; i += 4) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows.rows; ++r) {
      const __m256d cr = _mm256_set1_pd(coeffs[r].real());
      const __m256d ci = _mm256_set1_pd(coeffs[r].imag());
      const __m256d xr = _mm256_loadu_pd(rows.re[r] + i);
      const __m256d xi = _mm256_loadu_pd(rows.im[r] + i);
      acc_re = _mm256_add_pd(acc_re, _mm256_sub_pd(_mm256_mul_pd(cr, xr), _mm256_mul_pd(ci, xi)));
      acc_im = _mm256_add_pd(acc_im, _mm256_add_pd(_mm256_mul_pd(cr, xi), _mm256_mul_pd(ci, xr)));
    }
    _mm256_storeu_pd(out_re + i, acc_re);
    _mm256_storeu_pd(out_im + i, acc_im);
  }
  for (std::size_t i = vec_end; i < n; ++i) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t r = 0; r < rows.rows; ++r) {
      const double cr = coeffs[r].real();
      const double ci = coeffs[r].imag();
      re = re + (cr * rows.re[r][i] - ci * rows.im[r][i]);
      im = im + (cr * rows.im[r][i] + ci * rows.re[r][i]);
    }
    out_re[i] = re;
    out_im[i] = im;
  }
}

void weighted_sum_abs_avx2(const std::complex<double>* coeffs, GatheredRowsView rows, double* out) {
  const std::size_t n = rows.length;
  const std::size_t vec_end = n - n % 4;
  for (std::size_t i = 0; i < vec_end; i += 4) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows.rows; ++r) {
      const __m256d cr = _mm256_set1_pd(coeffs[r].real());
      const __m256d ci = _mm256_set1_pd(coeffs[r].imag());
      const __m256d xr = _mm256_loadu_pd(rows.re[r] + i);
      const __m256d xi = _mm256_loadu_pd(rows.im[r] + i);
      acc_re = _mm256_add_pd(acc_re, _mm256_sub_pd(_mm256_mul_pd(cr, xr), _mm256_mul_pd(ci, xi)));
      acc_im = _mm256_add_pd(acc_im, _mm256_add_pd(_mm256_mul_pd(cr, xi), _mm256_mul_pd(ci, xr)));
    }
    const __m256d mag2 = _mm256_add_pd(_mm256_mul_pd(acc_re, acc_re), _mm256_mul_pd(acc_im, acc_im));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(mag2));
  }
  for (std::size_t i = vec_end; i < n; ++i) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t r = 0; r < rows.rows; ++r) {
      const double cr = coeffs[r].real();
      const double ci = coeffs[r].imag();
      re = re + (cr * rows.re[r][i] - ci * rows.im[r][i]);
      im = im + (cr * rows.im[r][i] + ci * rows.re[r][i]);
    }
    out[i] = std::sqrt(re * re + im * im);
  }
}

std::size_t argmax_avx2(const double* values, std::size_t n) {
  if (n == 0) return 0;
  const std::size_t vec_end = n - n % 4;
  double best = values[0];
  if (vec_end > 0) {
    __m256d vmax = _mm256_loadu_pd(values);
    for (std::size_t i = 4; i < vec_end; i += 4) vmax = _mm256_max_pd(vmax, _mm256_loadu_pd(values + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vmax);
    for (double lane : lanes) best = lane > best ? lane : best;
  }
  for (std::size_t i = vec_end; i < n; ++i) best = values[i] > best ? values[i] : best;

  // second pass: first position holding the maximum
  const __m256d target = _mm256_set1_pd(best);
  for (std::size_t i = 0; i < vec_end; i += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(values + i), target, _CMP_EQ_OQ));
    if (mask != 0) return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (std::size_t i = vec_end; i < n; ++i) {
    if (values[i] == best) return i;
  }
  return 0;
}

}  // namespace

namespace detail {
const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", weighted_sum_avx2, weighted_sum_abs_avx2, argmax_avx2};
  return &table;
}
}  // namespace detail

}  // namespace rcsteer::kernels
