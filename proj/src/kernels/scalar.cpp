#include "kernels_internal.hpp"

#include <cmath>

namespace rcsteer::kernels {
namespace {

void weighted_sum_scalar(const std::complex<double>* coeffs, GatheredRowsView rows, double* out_re,
                         double* out_im) {
  for (std::size_t i = 0; i < rows.length; ++i) {
    out_re[i] = 0.0;
    out_im[i] = 0.0;
  }
  for (std::size_t r = 0; r < rows.rows; ++r) {
    const double cr = coeffs[r].real();
    const double ci = coeffs[r].imag();
    const double* xr = rows.re[r];
    const double* xi = rows.im[r];
    for (std::size_t i = 0; i < rows.length; ++i) {
      out_re[i] = out_re[i] + (cr * xr[i] - ci * xi[i]);
      out_im[i] = out_im[i] + (cr * xi[i] + ci * xr[i]);
    }
  }
}

void weighted_sum_abs_scalar(const std::complex<double>* coeffs, GatheredRowsView rows, double* out) {
  for (std::size_t i = 0; i < rows.length; ++i) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t r = 0; r < rows.rows; ++r) {
      const double cr = coeffs[r].real();
      const double ci = coeffs[r].imag();
      const double xr = rows.re[r][i];
      const double xi = rows.im[r][i];
      re = re + (cr * xr - ci * xi);
      im = im + (cr * xi + ci * xr);
    }
    out[i] = std::sqrt(re * re + im * im);
  }
}

std::size_t argmax_scalar(const double* values, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{"scalar", weighted_sum_scalar, weighted_sum_abs_scalar, argmax_scalar};
  return table;
}

}  // namespace rcsteer::kernels
