#include "bhed/kernels.hpp"

namespace bhed::kernels {
namespace {

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr};
  }
}

void scale_scalar(cplx a, cplx* x, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    x[i] = {ar * xr - ai * xi, ar * xi + ai * xr};
  }
}

double norm_sq_scalar(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void csr_matvec_scalar(const std::size_t* row_ptr, const std::uint32_t* cols, const cplx* vals, const cplx* x,
                       cplx* y, std::size_t row_begin, std::size_t row_end) {
  for (std::size_t r = row_begin; r < row_end; ++r) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const double vr = vals[k].real(), vi = vals[k].imag();
      const cplx xv = x[cols[k]];
      re += vr * xv.real() - vi * xv.imag();
      im += vr * xv.imag() + vi * xv.real();
    }
    y[r] = {re, im};
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, dotc_scalar, axpy_scalar, scale_scalar, norm_sq_scalar,
                                 csr_matvec_scalar};
  return table;
}

}  // namespace bhed::kernels
