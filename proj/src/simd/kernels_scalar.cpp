#include "lrt/simd/kernels.hpp"

namespace lrt::simd {
namespace {

void euler_step(const double* m, const double* y, const double* drive,
                const double* noise, double dt, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = drive[i];
  for (std::size_t j = 0; j < n; ++j) {
    const double yj = y[j];
    const double* col = m + j * n;
    for (std::size_t i = 0; i < n; ++i) out[i] = out[i] + col[i] * yj;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + dt * out[i] + noise[i];
}

void rank1_update(double* c, const double* u, const double* v, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double vj = v[j];
    double* col = c + j * n;
    for (std::size_t i = 0; i < n; ++i) col[i] = col[i] + u[i] * vj;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

constexpr KernelTable kScalar{"scalar", &euler_step, &rank1_update, &axpy};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace lrt::simd
