#pragma once

#include <span>

#include "lrt/types.hpp"

namespace lrt::linalg {

/// Matrix exponential by Padé scaling and squaring (degree 3..13, 1-norm
/// thresholds). Relative accuracy near unit roundoff for well-scaled input.
Matrix expm(const Matrix& a);

/// exp(M t) and its integral over [0, t], both from one exponential of the
/// augmented block matrix [[M t, t I], [0, 0]]. The integral is free of the
/// cancellation in M^{-1}(exp(M t) - I) for small t.
struct IntegratedExp {
  Matrix exp;
  Matrix integral;
};
IntegratedExp integrated_expm(const Matrix& m, double t);

double spectral_radius(const Matrix& a);
double max_real_eigenvalue(const Matrix& a);

/// LU factorisation of a square matrix with a reciprocal condition estimate.
/// Throws SingularSystem when the estimate is below `min_rcond`.
class CheckedLu {
 public:
  explicit CheckedLu(const Matrix& a, double min_rcond = 1e-14);

  Vector solve(const Vector& b) const { return lu_.solve(b); }
  Matrix solve(const Matrix& b) const { return lu_.solve(b); }
  Matrix inverse() const { return lu_.inverse(); }
  double rcond() const noexcept { return rcond_; }
  double condition() const noexcept { return 1.0 / rcond_; }

 private:
  Eigen::PartialPivLU<Matrix> lu_;
  double rcond_ = 0.0;
};

/// Solves M X + X M^T + Q = 0 for Hurwitz M (Bartels-Stewart on the complex
/// Schur form). Throws UnstableDrift if any eigenvalue of M has Re >= 0.
Matrix solve_continuous_lyapunov(const Matrix& m, const Matrix& q);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

/// Symmetric square root factor L with L L^T = a for a symmetric PSD matrix.
/// Diagonal input takes the elementwise square root; otherwise Cholesky with
/// an eigen-decomposition fallback for semidefinite input.
Matrix psd_factor(const Matrix& a);

}  // namespace lrt::linalg
