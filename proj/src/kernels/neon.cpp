#include "kernels_internal.hpp"

#include <arm_neon.h>

#include <cmath>

namespace rcsteer::kernels {
namespace {

// Two-lane float64 variant; same accumulation order as the scalar path.
// vmulq/vaddq/vsubq only, never vfmaq.

void weighted_sum_neon(const std::complex<double>* coeffs, GatheredRowsView rows, double* out_re,
                       double* out_im) {
  const std::size_t n = rows.length;
  const std::size_t vec_end = n - n % 2;
  for (std::size_t i = 0; i < vec_end; i += 2) {
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    for (std::size_t r = 0; r < rows.rows; ++r) {
      const float64x2_t cr = vdupq_n_f64(coeffs[r].real());
      const float64x2_t ci = vdupq_n_f64(coeffs[r].imag());
      const float64x2_t xr = vld1q_f64(rows.re[r] + i);
      const float64x2_t xi = vld1q_f64(rows.im[r] + i);
      acc_re = vaddq_f64(acc_re, vsubq_f64(vmulq_f64(cr, xr), vmulq_f64(ci, xi)));
      acc_im = vaddq_f64(acc_im, vaddq_f64(vmulq_f64(cr, xi), vmulq_f64(ci, xr)));
    }
    vst1q_f64(out_re + i, acc_re);
    vst1q_f64(out_im + i, acc_im);
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

void weighted_sum_abs_neon(const std::complex<double>* coeffs, GatheredRowsView rows, double* out) {
  const std::size_t n = rows.length;
  const std::size_t vec_end = n - n % 2;
  for (std::size_t i = 0; i < vec_end; i += 2) {
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    for (std::size_t r = 0; r < rows.rows; ++r) {
      const float64x2_t cr = vdupq_n_f64(coeffs[r].real());
      const float64x2_t ci = vdupq_n_f64(coeffs[r].imag());
      const float64x2_t xr = vld1q_f64(rows.re[r] + i);
      const float64x2_t xi = vld1q_f64(rows.im[r] + i);
      acc_re = vaddq_f64(acc_re, vsubq_f64(vmulq_f64(cr, xr), vmulq_f64(ci, xi)));
      acc_im = vaddq_f64(acc_im, vaddq_f64(vmulq_f64(cr, xi), vmulq_f64(ci, xr)));
    }
    const float64x2_t mag2 = vaddq_f64(vmulq_f64(acc_re, acc_re), vmulq_f64(acc_im, acc_im));
    vst1q_f64(out + i, vsqrtq_f64(mag2));
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

std::size_t argmax_neon(const double* values, std::size_t n) {
  if (n == 0) return 0;
  const std::size_t vec_end = n - n % 2;
  double best = values[0];
  if (vec_end > 0) {
    float64x2_t vmax = vld1q_f64(values);
    for (std::size_t i = 2; i < vec_end; i += 2) vmax = vmaxq_f64(vmax, vld1q_f64(values + i));
    best = vmaxvq_f64(vmax);
  }
  for (std::size_t i = vec_end; i < n; ++i) best = values[i] > best ? values[i] : best;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] == best) return i;
  }
  return 0;
}

}  // namespace

namespace detail {
const KernelTable* neon_table() {
  static const KernelTable table{"neon", weighted_sum_neon, weighted_sum_abs_neon, argmax_neon};
  return &table;
}
}  // namespace detail

}  // namespace rcsteer::kernels
