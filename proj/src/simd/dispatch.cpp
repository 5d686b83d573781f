#include <cstdlib>
#include <string>

#include "bhed/kernels.hpp"

namespace bhed::kernels {

#if defined(BHED_HAVE_AVX2_KERNELS)
const KernelTable& avx2_kernels();
#endif

const KernelTable* avx2_table() {
#if defined(BHED_HAVE_AVX2_KERNELS)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* forced = std::getenv("BHED_SIMD");
    if (forced != nullptr && std::string(forced) == "scalar") return &scalar_table();
    const KernelTable* wide = avx2_table();
    return wide != nullptr ? wide : &scalar_table();
  }();
  return *chosen;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace bhed::kernels
