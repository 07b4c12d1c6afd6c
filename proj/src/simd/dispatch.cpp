#include <cstdlib>
#include <string_view>

#include "polyform/simd/kernels.hpp"

namespace polyform::simd {

const KernelTable& active_kernels() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("POLYFORM_SIMD");
    std::string_view want = env ? env : "";
    if (want == "scalar") return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace polyform::simd
