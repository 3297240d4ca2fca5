#include <cstdlib>
#include <string_view>

#include "evoim/simd/kernels.hpp"

namespace evoim::simd {

#if defined(EVOIM_HAVE_AVX2)
const KernelTable& avx2_kernel_table() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(EVOIM_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* env = std::getenv("EVOIM_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace evoim::simd
