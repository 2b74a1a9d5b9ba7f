#include <cmath>
#include <string>

#include "lrt/baselines.hpp"
#include "lrt/dynamics.hpp"
#include "lrt/error.hpp"
#include "lrt/linalg.hpp"

namespace lrt {

VarModel fit_var1_ols(const std::vector<Vector>& observations) {
  if (observations.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "VAR fit needs at least two observations");
  }
  const Eigen::Index n = observations.front().size();
  const auto m = static_cast<Eigen::Index>(observations.size() - 1);
  if (m < n + 2) {
    throw Error(ErrorCode::InsufficientSamples,
                "VAR fit needs at least N + 2 transitions, got " + std::to_string(m));
  }
  Matrix x(m, n);
  Matrix y(m, n);
  for (Eigen::Index t = 0; t < m; ++t) {
    x.row(t) = observations[static_cast<std::size_t>(t)].transpose();
    y.row(t) = observations[static_cast<std::size_t>(t) + 1].transpose();
  }
  // Standardise regressors; a column with no relative variation cannot be
  // separated from the intercept.
  const Vector mean = x.colwise().mean().transpose();
  Matrix xs = x.rowwise() - mean.transpose();
  Vector scale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double sd = std::sqrt(xs.col(j).squaredNorm() / static_cast<double>(m));
    if (!(sd > 1e-12 * std::max(std::abs(mean(j)), 1e-300))) {
      throw Error(ErrorCode::RankDeficientRegressors,
                  "regressor " + std::to_string(j) + " is (numerically) constant");
    }
    scale(j) = sd;
    xs.col(j) /= sd;
  }
  Matrix design(m, n + 1);
  design.col(0).setOnes();
  design.rightCols(n) = xs;
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < n + 1) {
    throw Error(ErrorCode::RankDeficientRegressors,
                "design matrix rank " + std::to_string(qr.rank()) + " < " + std::to_string(n + 1));
  }
  const Matrix beta = qr.solve(y);  // (n+1) x n
  const Matrix resid = y - design * beta;

  VarModel model;
  model.samples = static_cast<std::size_t>(m);
  model.ar = (beta.bottomRows(n).array().colwise() / scale.array()).matrix().transpose();
  model.intercept = beta.row(0).transpose() - model.ar * mean;

  const Matrix xtx_inv = (design.transpose() * design).inverse();
  const double dof = static_cast<double>(m - n - 1);
  model.ar_stderr = Matrix(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s2 = resid.col(k).squaredNorm() / dof;
    for (Eigen::Index j = 0; j < n; ++j) {
      model.ar_stderr(k, j) = std::sqrt(s2 * xtx_inv(j + 1, j + 1)) / scale(j);
    }
  }
  return model;
}

VarModel fit_var1(const IOTable& table, const Matrix& nu, std::size_t samples,
                  std::uint64_t seed, const VarFitOptions& options) {
  const auto n = table.size();
  if (samples < n + 2) {
    throw Error(ErrorCode::InsufficientSamples,
                "VAR calibration needs at least N + 2 samples, got " + std::to_string(samples));
  }
  const Vector y0 = equilibrium_output(table.coefficients, table.demand);
  EulerMaruyama em(table.drift(), table.demand, nu, options.dt, seed);
  em.set_state(y0);
  const auto burn = std::llround(options.burn_in / options.dt);
  for (long long k = 0; k < burn; ++k) em.step();
  const auto per_sample = std::max<long long>(1, std::llround(options.interval / options.dt));

  std::vector<Vector> obs;
  obs.reserve(samples + 1);
  obs.push_back(em.state());
  for (std::size_t s = 0; s < samples; ++s) {
    for (long long k = 0; k < per_sample; ++k) em.step();
    if (!em.state().allFinite()) {
      throw Error(ErrorCode::NumericalBlowup, "non-finite state during VAR calibration");
    }
    obs.push_back(em.state());
  }
  VarModel model = fit_var1_ols(obs);
  model.calibration_year = table.year;
  return model;
}

std::vector<Vector> var_forecast(const VarModel& model, const Vector& y, std::size_t steps) {
  std::vector<Vector> out;
  Vector cur = y;
  for (std::size_t h = 0; h < steps; ++h) {
    cur = model.ar * cur + model.intercept;
    out.push_back(cur);
  }
  return out;
}

Vector perturbed_io_forecast(const IOTable& table, const Vector& shock) {
  const auto n = static_cast<Eigen::Index>(table.size());
  if (shock.size() != n) throw Error(ErrorCode::InvalidArgument, "shock vector has wrong length");
  return linalg::CheckedLu(Matrix::Identity(n, n) - table.coefficients).solve(shock);
}

}  // namespace lrt
