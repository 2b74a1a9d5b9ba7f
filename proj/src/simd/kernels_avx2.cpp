#include <immintrin.h>

#include "kernels_impl.hpp"

namespace lrt::simd::detail {
namespace {

// Multiply and add stay separate instructions (no FMA) to match the scalar
// rounding sequence exactly.

void euler_step(const double* m, const double* y, const double* drive,
                const double* noise, double dt, double* out, std::size_t n) {
  const std::size_t nv = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n; ++i) out[i] = drive[i];
  for (std::size_t j = 0; j < n; ++j) {
    const double yj = y[j];
    const __m256d vy = _mm256_set1_pd(yj);
    const double* col = m + j * n;
    std::size_t i = 0;
    for (; i < nv; i += 4) {
      __m256d acc = _mm256_loadu_pd(out + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(col + i), vy));
      _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) out[i] = out[i] + col[i] * yj;
  }
  const __m256d vdt = _mm256_set1_pd(dt);
  std::size_t i = 0;
  for (; i < nv; i += 4) {
    __m256d r = _mm256_mul_pd(vdt, _mm256_loadu_pd(out + i));
    r = _mm256_add_pd(_mm256_loadu_pd(y + i), r);
    r = _mm256_add_pd(r, _mm256_loadu_pd(noise + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = y[i] + dt * out[i] + noise[i];
}

void rank1_update(double* c, const double* u, const double* v, std::size_t n) {
  const std::size_t nv = n & ~std::size_t{3};
  for (std::size_t j = 0; j < n; ++j) {
    const double vj = v[j];
    const __m256d vv = _mm256_set1_pd(vj);
    double* col = c + j * n;
    std::size_t i = 0;
    for (; i < nv; i += 4) {
      __m256d acc = _mm256_loadu_pd(col + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(u + i), vv));
      _mm256_storeu_pd(col + i, acc);
    }
    for (; i < n; ++i) col[i] = col[i] + u[i] * vj;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const std::size_t nv = n & ~std::size_t{3};
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i < nv; i += 4) {
    __m256d r = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), r));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

constexpr KernelTable kAvx2{"avx2", &euler_step, &rank1_update, &axpy};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kAvx2; }

}  // namespace lrt::simd::detail
