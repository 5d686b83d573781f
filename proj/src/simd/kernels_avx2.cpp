// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// CPUID check, so nothing here may be called unconditionally.
#include <immintrin.h>

#include "bhed/kernels.hpp"

namespace bhed::kernels {
namespace {

// Two complex<double> per __m256d, interleaved (re0, im0, re1, im1).

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  const auto* xp = reinterpret_cast<const double*>(x);
  const auto* yp = reinterpret_cast<const double*>(y);
  __m256d same0 = _mm256_setzero_pd(), same1 = _mm256_setzero_pd();
  __m256d swap0 = _mm256_setzero_pd(), swap1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xp + 2 * i + 4);
    const __m256d y1 = _mm256_loadu_pd(yp + 2 * i + 4);
    same0 = _mm256_fmadd_pd(x0, y0, same0);
    same1 = _mm256_fmadd_pd(x1, y1, same1);
    swap0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0x5), swap0);
    swap1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0x5), swap1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
    same0 = _mm256_fmadd_pd(x0, y0, same0);
    swap0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0x5), swap0);
  }
  const __m256d same = _mm256_add_pd(same0, same1);
  // swap lanes hold (xr*yi, xi*yr, ...); imaginary part is even minus odd.
  const __m256d swap = _mm256_add_pd(swap0, swap1);
  alignas(32) double s[4];
  _mm256_store_pd(s, swap);
  double re = hsum(same);
  double im = (s[0] - s[1]) + (s[2] - s[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const auto* xp = reinterpret_cast<const double*>(x);
  auto* yp = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d t1 = _mm256_mul_pd(ar, xv);
    const __m256d t2 = _mm256_mul_pd(ai, _mm256_permute_pd(xv, 0x5));
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), _mm256_addsub_pd(t1, t2)));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + a.real() * xr - a.imag() * xi, y[i].imag() + a.real() * xi + a.imag() * xr};
  }
}

void scale_avx2(cplx a, cplx* x, std::size_t n) {
  auto* xp = reinterpret_cast<double*>(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d t1 = _mm256_mul_pd(ar, xv);
    const __m256d t2 = _mm256_mul_pd(ai, _mm256_permute_pd(xv, 0x5));
    _mm256_storeu_pd(xp + 2 * i, _mm256_addsub_pd(t1, t2));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    x[i] = {a.real() * xr - a.imag() * xi, a.real() * xi + a.imag() * xr};
  }
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
  const auto* xp = reinterpret_cast<const double*>(x);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(xp + 2 * i);
    const __m256d b = _mm256_loadu_pd(xp + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(xp + 2 * i);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void csr_matvec_avx2(const std::size_t* row_ptr, const std::uint32_t* cols, const cplx* vals, const cplx* x,
                     cplx* y, std::size_t row_begin, std::size_t row_end) {
  const auto* vp = reinterpret_cast<const double*>(vals);
  const auto* xp = reinterpret_cast<const double*>(x);
  for (std::size_t r = row_begin; r < row_end; ++r) {
    std::size_t k = row_ptr[r];
    const std::size_t end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 2 <= end; k += 2) {
      const __m256d v = _mm256_loadu_pd(vp + 2 * k);
      const __m256d xv = _mm256_set_m128d(_mm_loadu_pd(xp + 2 * static_cast<std::size_t>(cols[k + 1])),
                                          _mm_loadu_pd(xp + 2 * static_cast<std::size_t>(cols[k])));
      const __m256d vr = _mm256_movedup_pd(v);
      const __m256d vi = _mm256_permute_pd(v, 0xF);
      acc = _mm256_add_pd(acc, _mm256_addsub_pd(_mm256_mul_pd(vr, xv), _mm256_mul_pd(vi, _mm256_permute_pd(xv, 0x5))));
    }
    const __m128d folded = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double re = _mm_cvtsd_f64(folded);
    double im = _mm_cvtsd_f64(_mm_unpackhi_pd(folded, folded));
    if (k < end) {
      const double vr = vals[k].real(), vi = vals[k].imag();
      const cplx xv = x[cols[k]];
      re += vr * xv.real() - vi * xv.imag();
      im += vr * xv.imag() + vi * xv.real();
    }
    y[r] = {re, im};
  }
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::Avx2, dotc_avx2, axpy_avx2, scale_avx2, norm_sq_avx2, csr_matvec_avx2};
  return table;
}

}  // namespace bhed::kernels
