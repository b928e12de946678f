#include <cstdlib>
#include <string_view>

#include "dnf/kernels.hpp"

namespace dnf::kernels {

const Ops& active_ops() {
  static const Ops* const chosen = [] {
    const char* env = std::getenv("DNF_KERNELS");
    const std::string_view want = env ? env : "";
    if (want == "scalar") return &scalar_ops();
    const Ops* simd = avx2_ops();
    if (simd && (want.empty() || want == "avx2")) return simd;
    return &scalar_ops();
  }();
  return *chosen;
}

}  // namespace dnf::kernels
