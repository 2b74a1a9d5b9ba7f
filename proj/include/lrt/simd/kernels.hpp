#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace lrt::simd {

// Inner loops of the stochastic integrator and the correlation estimator.
//
// Every variant walks the data in the same order as the scalar reference and
// never fuses multiply-add, so all variants produce bitwise-identical results.
// Matrices are column-major with leading dimension n.
struct KernelTable {
  std::string_view name;

  // out = y + dt * (drive + M y) + noise.  `out` must not alias `y`.
  void (*euler_step)(const double* m, const double* y, const double* drive,
                     const double* noise, double dt, double* out,
                     std::size_t n);

  // C += u v^T
  void (*rank1_update)(double* c, const double* u, const double* v,
                       std::size_t n);

  // y += a x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// Variants compiled into this build and supported by the running CPU,
/// scalar first.
std::vector<const KernelTable*> available_kernels();

/// Kernel set used by the library. Picks the widest supported variant unless
/// the LRT_KERNELS environment variable names another one ("scalar", "avx2",
/// "neon").
const KernelTable& active_kernels();

}  // namespace lrt::simd
