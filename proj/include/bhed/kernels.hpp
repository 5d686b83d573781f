#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Complex vector kernels used by the Krylov solver, operator application and
// correlator contractions. Each kernel has a scalar reference implementation
// and an AVX2/FMA variant; the variant is chosen once at runtime from CPUID.
// Setting BHED_SIMD=scalar in the environment forces the reference path.

namespace bhed::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  /// sum_i conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  /// y += a * x
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  /// x *= a
  void (*scale)(cplx a, cplx* x, std::size_t n);
  /// sum_i |x_i|^2
  double (*norm_sq)(const cplx* x, std::size_t n);
  /// y[r] = sum_k vals[k] * x[cols[k]] for r in [row_begin, row_end)
  void (*csr_matvec)(const std::size_t* row_ptr, const std::uint32_t* cols, const cplx* vals, const cplx* x,
                     cplx* y, std::size_t row_begin, std::size_t row_end);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();
const KernelTable& active();
std::string_view isa_name(Isa isa);

inline cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotc(x.data(), y.data(), x.size());
}
inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) { active().axpy(a, x.data(), y.data(), x.size()); }
inline void scale(cplx a, std::span<cplx> x) { active().scale(a, x.data(), x.size()); }
inline double norm_sq(std::span<const cplx> x) { return active().norm_sq(x.data(), x.size()); }

}  // namespace bhed::kernels
