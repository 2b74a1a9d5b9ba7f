#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace lrt::simd::detail {
namespace {

// vmulq + vaddq rather than vfmaq, see the note in kernels_avx2.cpp.

void euler_step(const double* m, const double* y, const double* drive,
                const double* noise, double dt, double* out, std::size_t n) {
  const std::size_t nv = n & ~std::size_t{1};
  for (std::size_t i = 0; i < n; ++i) out[i] = drive[i];
  for (std::size_t j = 0; j < n; ++j) {
    const double yj = y[j];
    const float64x2_t vy = vdupq_n_f64(yj);
    const double* col = m + j * n;
    std::size_t i = 0;
    for (; i < nv; i += 2) {
      float64x2_t acc = vld1q_f64(out + i);
      acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(col + i), vy));
      vst1q_f64(out + i, acc);
    }
    for (; i < n; ++i) out[i] = out[i] + col[i] * yj;
  }
  const float64x2_t vdt = vdupq_n_f64(dt);
  std::size_t i = 0;
  for (; i < nv; i += 2) {
    float64x2_t r = vmulq_f64(vdt, vld1q_f64(out + i));
    r = vaddq_f64(vld1q_f64(y + i), r);
    r = vaddq_f64(r, vld1q_f64(noise + i));
    vst1q_f64(out + i, r);
  }
  for (; i < n; ++i) out[i] = y[i] + dt * out[i] + noise[i];
}

void rank1_update(double* c, const double* u, const double* v, std::size_t n) {
  const std::size_t nv = n & ~std::size_t{1};
  for (std::size_t j = 0; j < n; ++j) {
    const double vj = v[j];
    const float64x2_t vv = vdupq_n_f64(vj);
    double* col = c + j * n;
    std::size_t i = 0;
    for (; i < nv; i += 2) {
      float64x2_t acc = vld1q_f64(col + i);
      acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(u + i), vv));
      vst1q_f64(col + i, acc);
    }
    for (; i < n; ++i) col[i] = col[i] + u[i] * vj;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const std::size_t nv = n & ~std::size_t{1};
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i < nv; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

constexpr KernelTable kNeon{"neon", &euler_step, &rank1_update, &axpy};

}  // namespace

const KernelTable& neon_kernels() noexcept { return kNeon; }

}  // namespace lrt::simd::detail
