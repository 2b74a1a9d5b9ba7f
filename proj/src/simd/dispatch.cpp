#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "lrt/error.hpp"

namespace lrt::simd {
namespace {

bool cpu_has_avx2() {
#if defined(LRT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& select_kernels() {
  const auto candidates = available_kernels();
  if (const char* env = std::getenv("LRT_KERNELS"); env != nullptr && *env) {
    const std::string_view wanted(env);
    for (const auto* k : candidates) {
      if (k->name == wanted) return *k;
    }
    throw Error(ErrorCode::InvalidArgument,
                "LRT_KERNELS=" + std::string(wanted) +
                    " is not available on this build/CPU");
  }
  return *candidates.back();
}

}  // namespace

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
#if defined(LRT_HAVE_AVX2)
  if (cpu_has_avx2()) out.push_back(&detail::avx2_kernels());
#endif
#if defined(LRT_HAVE_NEON)
  out.push_back(&detail::neon_kernels());
#endif
  return out;
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = select_kernels();
  return chosen;
}

}  // namespace lrt::simd
