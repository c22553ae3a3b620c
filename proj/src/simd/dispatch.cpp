#include <cstdlib>
#include <string_view>

#include "geoflow/simd/kernels.hpp"

namespace geoflow::simd {

#ifdef GEOFLOW_HAVE_AVX2
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#ifdef GEOFLOW_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* pin = std::getenv("GEOFLOW_SIMD");
    if (pin && std::string_view(pin) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace geoflow::simd
