#include "lrt/linalg.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "lrt/error.hpp"

namespace lrt::linalg {
namespace {

// Higham (2005) backward-error thresholds for the 1-norm.
constexpr std::array<double, 5> kTheta{1.495585217958292e-2, 2.539398330063230e-1,
                                       9.504178996162932e-1, 2.097847961257068e0,
                                       5.371920351148152e0};

double norm1(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

template <std::size_t K>
void pade_low(const Matrix& a, const std::array<double, K>& b, Matrix& u,
              Matrix& v) {
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix power = ident;
  Matrix uo = b[1] * ident;
  v = b[0] * ident;
  for (std::size_t k = 2; k < K; k += 2) {
    power = power * a2;
    v += b[k] * power;
    uo += b[k + 1] * power;
  }
  u = a * uo;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  static constexpr std::array<double, 14> b{
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  Matrix inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  u = a * (a6 * inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

}  // namespace

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::InvalidArgument, "expm of a non-square matrix");
  }
  if (!a.allFinite()) {
    throw Error(ErrorCode::NumericalBlowup, "expm of a non-finite matrix");
  }
  if (a.rows() == 0) return a;
  const double norm = norm1(a);
  Matrix u, v;
  int squarings = 0;
  if (norm <= kTheta[0]) {
    pade_low(a, std::array<double, 4>{120.0, 60.0, 12.0, 1.0}, u, v);
  } else if (norm <= kTheta[1]) {
    pade_low(a, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0},
             u, v);
  } else if (norm <= kTheta[2]) {
    pade_low(a,
             std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                   25200.0, 1512.0, 56.0, 1.0},
             u, v);
  } else if (norm <= kTheta[3]) {
    pade_low(a,
             std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0,
                                    302702400.0, 30270240.0, 2162160.0, 110880.0,
                                    3960.0, 90.0, 1.0},
             u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta[4]))));
    pade13(a * std::ldexp(1.0, -squarings), u, v);
  }
  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

IntegratedExp integrated_expm(const Matrix& m, double t) {
  const Eigen::Index n = m.rows();
  Matrix aug = Matrix::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = m * t;
  aug.topRightCorner(n, n) = Matrix::Identity(n, n) * t;
  const Matrix e = expm(aug);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, n)};
}

double spectral_radius(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double max_real_eigenvalue(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a, false);
  return es.eigenvalues().real().maxCoeff();
}

CheckedLu::CheckedLu(const Matrix& a, double min_rcond) : lu_(a) {
  rcond_ = a.rows() == 0 ? 1.0 : lu_.rcond();
  if (!(rcond_ >= min_rcond)) {
    throw Error(ErrorCode::SingularSystem,
                "matrix is numerically singular (condition estimate " +
                    std::to_string(1.0 / rcond_) + ")");
  }
}

Matrix solve_continuous_lyapunov(const Matrix& m, const Matrix& q) {
  using Complex = std::complex<double>;
  using CMatrix = Eigen::MatrixXcd;
  const Eigen::Index n = m.rows();
  if (m.cols() != n || q.rows() != n || q.cols() != n) {
    throw Error(ErrorCode::InvalidArgument, "Lyapunov operands must be square and equal size");
  }
  Eigen::ComplexSchur<Matrix> schur(m);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::UnstableDrift, "Schur decomposition failed");
  }
  const CMatrix& t = schur.matrixT();
  const CMatrix& u = schur.matrixU();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(t(i, i).real() < 0.0)) {
      throw Error(ErrorCode::UnstableDrift,
                  "drift matrix has eigenvalue with real part " +
                      std::to_string(t(i, i).real()));
    }
  }
  // T X + X T^H = -Q~ with T upper triangular; back-substitute from the
  // bottom-right corner.
  const CMatrix qt = u.adjoint() * q.cast<Complex>() * u;
  CMatrix x = CMatrix::Zero(n, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      Complex rhs = -qt(i, j);
      for (Eigen::Index k = i + 1; k < n; ++k) rhs -= t(i, k) * x(k, j);
      for (Eigen::Index k = j + 1; k < n; ++k) rhs -= x(i, k) * std::conj(t(j, k));
      x(i, j) = rhs / (t(i, i) + std::conj(t(j, j)));
    }
  }
  Matrix sigma = (u * x * u.adjoint()).real();
  return 0.5 * (sigma + sigma.transpose());
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

Matrix psd_factor(const Matrix& a) {
  const Eigen::Index n = a.rows();
  if (a.isDiagonal(0.0)) {
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (a(i, i) < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "covariance has a negative variance");
      }
      l(i, i) = std::sqrt(a(i, i));
    }
    return l;
  }
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InvalidArgument, "covariance is not positive semidefinite");
  }
  return es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

}  // namespace lrt::linalg
