#pragma once

#include "lrt/simd/kernels.hpp"

namespace lrt::simd::detail {

#if defined(LRT_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(LRT_HAVE_NEON)
const KernelTable& neon_kernels() noexcept;
#endif

}  // namespace lrt::simd::detail
