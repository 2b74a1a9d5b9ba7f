#include "lrt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "lrt/error.hpp"
#include "lrt/linalg.hpp"
#include "lrt/simd/kernels.hpp"
#include "lrt/textio.hpp"

namespace lrt {

ShockProfile ShockProfile::impulse(Vector x, double t0) {
  ShockProfile p;
  p.kind = Kind::Impulse;
  p.magnitude = std::move(x);
  p.t0 = t0;
  return p;
}

ShockProfile ShockProfile::step(Vector x, double t0) {
  ShockProfile p;
  p.kind = Kind::Step;
  p.magnitude = std::move(x);
  p.t0 = t0;
  return p;
}

ShockProfile ShockProfile::tabulated(std::vector<double> times, std::vector<Vector> values) {
  ShockProfile p;
  p.kind = Kind::Tabulated;
  p.times = std::move(times);
  p.values = std::move(values);
  return p;
}

void ShockProfile::validate(std::size_t n) const {
  const auto len = static_cast<Eigen::Index>(n);
  switch (kind) {
    case Kind::None:
      return;
    case Kind::Impulse:
    case Kind::Step:
      if (magnitude.size() != len) {
        throw Error(ErrorCode::InvalidArgument, "shock vector length does not match sector count");
      }
      return;
    case Kind::Tabulated:
      if (times.empty() || times.size() != values.size()) {
        throw Error(ErrorCode::InvalidArgument, "tabulated shock needs one vector per grid time");
      }
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (values[k].size() != len) {
          throw Error(ErrorCode::InvalidArgument, "tabulated shock vector has wrong length");
        }
        if (k > 0 && !(times[k] > times[k - 1])) {
          throw Error(ErrorCode::InvalidArgument, "tabulated shock grid must be strictly increasing");
        }
      }
      return;
  }
}

Vector ShockProfile::rate_at(double t, std::size_t n) const {
  const auto len = static_cast<Eigen::Index>(n);
  switch (kind) {
    case Kind::Step:
      return t >= t0 ? magnitude : Vector::Zero(len);
    case Kind::Tabulated: {
      if (t < times.front() || t > times.back()) return Vector::Zero(len);
      auto it = std::upper_bound(times.begin(), times.end(), t);
      if (it == times.end()) return values.back();
      const auto k = static_cast<std::size_t>(it - times.begin());
      const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
      return (1.0 - w) * values[k - 1] + w * values[k];
    }
    default:
      return Vector::Zero(len);
  }
}

Vector equilibrium_output(const Matrix& a, const Vector& d) {
  const auto n = a.rows();
  const Matrix leontief = Matrix::Identity(n, n) - a;
  const linalg::CheckedLu lu(leontief);
  Vector y = lu.solve(d);
  const double scale = std::max(d.cwiseAbs().maxCoeff(), 1e-300);
  const double residual = (leontief * y - d).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10 * scale) && d.cwiseAbs().maxCoeff() > 0.0) {
    // One step of iterative refinement before giving up.
    y += lu.solve(Vector(d - leontief * y));
    if (!((leontief * y - d).cwiseAbs().maxCoeff() <= 1e-10 * scale)) {
      throw Error(ErrorCode::SingularSystem,
                  "equilibrium solve residual too large (condition estimate " +
                      textio::fmt(lu.condition()) + ")");
    }
  }
  return y;
}

Matrix stationary_covariance(const Matrix& a, const Matrix& nu) {
  const auto n = a.rows();
  return linalg::solve_continuous_lyapunov(a - Matrix::Identity(n, n), nu);
}

Matrix lagged_covariance(const Matrix& a, const Matrix& nu, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lag must be non-negative");
  const Matrix sigma = stationary_covariance(a, nu);
  if (tau == 0.0) return sigma;
  const auto n = a.rows();
  return linalg::expm((a - Matrix::Identity(n, n)) * tau) * sigma;
}

EulerMaruyama::EulerMaruyama(const Matrix& drift, Vector drive, const Matrix& nu, double dt,
                             std::uint64_t seed)
    : drift_(drift), drive_(std::move(drive)), dt_(dt), sqrt_dt_(std::sqrt(dt)), rng_(seed) {
  const auto n = drift_.rows();
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (drift_.cols() != n || drive_.size() != n || nu.rows() != n || nu.cols() != n) {
    throw Error(ErrorCode::InvalidArgument, "integrator operand dimensions do not match");
  }
  diagonal_noise_ = nu.isDiagonal(0.0);
  zero_noise_ = nu.cwiseAbs().maxCoeff() == 0.0;
  if (diagonal_noise_) {
    noise_diag_ = linalg::psd_factor(nu).diagonal() * sqrt_dt_;
  } else {
    noise_factor_ = linalg::psd_factor(nu) * sqrt_dt_;
  }
  state_ = Vector::Zero(n);
  next_ = Vector::Zero(n);
  normals_ = Vector::Zero(n);
  noise_ = Vector::Zero(n);
  drive_scratch_ = Vector::Zero(n);
}

void EulerMaruyama::step(const Vector& extra_drive) {
  const auto n = static_cast<std::size_t>(state_.size());
  if (zero_noise_) {
    noise_.setZero();
  } else {
    rng_.fill(std::span<double>(normals_.data(), n));
    if (diagonal_noise_) {
      noise_ = noise_diag_.cwiseProduct(normals_);
    } else {
      noise_.noalias() = noise_factor_ * normals_;
    }
  }
  const double* drive = drive_.data();
  if (extra_drive.size() != 0) {
    drive_scratch_ = drive_ + extra_drive;
    drive = drive_scratch_.data();
  }
  simd::active_kernels().euler_step(drift_.data(), state_.data(), drive, noise_.data(), dt_,
                                    next_.data(), n);
  state_.swap(next_);
}

Trajectory simulate_trajectory(const IOTable& table, const Matrix& nu, const ShockProfile& shock,
                               const SimulationOptions& options) {
  const std::size_t n = table.size();
  shock.validate(n);
  if (!(options.dt > 0.0) || !(options.horizon > 0.0) || !(options.burn_in >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dt and horizon must be positive, burn-in non-negative");
  }
  const Vector y0 = equilibrium_output(table.coefficients, table.demand);
  const double limit = 1e12 * std::max(y0.cwiseAbs().maxCoeff(), 1.0);

  EulerMaruyama em(table.drift(), table.demand, nu, options.dt, options.seed);
  em.set_state(y0);

  auto check = [&](const Vector& y, double t) {
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > limit) {
      throw Error(ErrorCode::NumericalBlowup,
                  "state exceeded 1e12 x |Y0| at t=" + textio::fmt(t) + " (dt too large?)");
    }
  };

  const auto burn_steps = static_cast<std::size_t>(std::llround(options.burn_in / options.dt));
  for (std::size_t k = 0; k < burn_steps; ++k) {
    em.step();
    if ((k & 63) == 0) check(em.state(), -options.burn_in + static_cast<double>(k) * options.dt);
  }
  check(em.state(), 0.0);

  const auto steps = static_cast<std::size_t>(std::llround(options.horizon / options.dt));
  Trajectory traj;
  traj.dt = options.dt;
  traj.t_start = 0.0;
  traj.seed = options.seed;
  traj.shock = shock;
  traj.states.reserve(steps + 1);
  traj.states.push_back(em.state());

  const bool continuous = shock.kind == ShockProfile::Kind::Step ||
                          shock.kind == ShockProfile::Kind::Tabulated;
  bool impulse_done = shock.kind != ShockProfile::Kind::Impulse;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * options.dt;
    if (continuous) {
      em.step(shock.rate_at(t, n));
    } else {
      em.step();
    }
    if (!impulse_done && shock.t0 < t + options.dt && shock.t0 >= t) {
      em.set_state(em.state() + shock.magnitude);
      impulse_done = true;
    }
    check(em.state(), t + options.dt);
    traj.states.push_back(em.state());
  }
  return traj;
}

void write_trajectory(const Trajectory& trajectory, std::ostream& out) {
  const std::size_t n = trajectory.states.empty() ? 0 : trajectory.states.front().size();
  out << 't';
  for (std::size_t i = 1; i <= n; ++i) out << ",Y_" << i;
  out << '\n';
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    out << textio::fmt(trajectory.time(k));
    const Vector& y = trajectory.states[k];
    for (Eigen::Index i = 0; i < y.size(); ++i) out << ',' << textio::fmt(y(i));
    out << '\n';
  }
}

}  // namespace lrt
