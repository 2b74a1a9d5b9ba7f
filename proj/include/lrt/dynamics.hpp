#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lrt/iodata.hpp"
#include "lrt/rng.hpp"
#include "lrt/types.hpp"

namespace lrt {

/// Demand shock X(t) applied on top of the equilibrium demand.
///
/// Times are in years relative to the start of the recorded trajectory.
/// Tabulated profiles are linearly interpolated between grid points and are
/// zero outside the grid.
struct ShockProfile {
  enum class Kind { None, Impulse, Step, Tabulated };
  Kind kind = Kind::None;
  Vector magnitude;  // impulse/step
  double t0 = 0.0;   // impulse/step
  std::vector<double> times;
  std::vector<Vector> values;

  static ShockProfile none() { return {}; }
  static ShockProfile impulse(Vector x, double t0 = 0.0);
  static ShockProfile step(Vector x, double t0 = 0.0);
  static ShockProfile tabulated(std::vector<double> times, std::vector<Vector> values);

  /// Throws InvalidArgument on a non-increasing grid or wrong vector length.
  void validate(std::size_t n) const;
  /// Continuous part of the shock at time t (zero for impulses).
  Vector rate_at(double t, std::size_t n) const;
};

struct Trajectory {
  double dt = 0.0;
  double t_start = 0.0;
  std::vector<Vector> states;
  std::uint64_t seed = 0;
  ShockProfile shock;

  double time(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
};

struct SimulationOptions {
  double dt = 0.01;
  double horizon = 10.0;
  double burn_in = 50.0;
  std::uint64_t seed = 1;
};

/// Y0 = (I - A)^{-1} D by LU solve. Throws SingularSystem.
Vector equilibrium_output(const Matrix& a, const Vector& d);

/// Stationary covariance sigma of dY = (A - I) Y dt + dW, <dW dW^T> = nu dt:
/// the solution of M sigma + sigma M^T + nu = 0 with M = A - I.
Matrix stationary_covariance(const Matrix& a, const Matrix& nu);

/// Centered lagged covariance <y(t + tau) y(t)^T> = exp(M tau) sigma.
Matrix lagged_covariance(const Matrix& a, const Matrix& nu, double tau);

/// Euler-Maruyama stepper for dY = [M Y + b + X(t)] dt + dW.
///
/// The inner update runs through the active SIMD kernel set; the noise is a
/// PSD factor of nu applied to standard normals from a GaussianStream.
class EulerMaruyama {
 public:
  EulerMaruyama(const Matrix& drift, Vector drive, const Matrix& nu, double dt,
                std::uint64_t seed);

  void set_state(const Vector& y) { state_ = y; }
  const Vector& state() const noexcept { return state_; }
  double dt() const noexcept { return dt_; }

  /// One step. `extra_drive` (may be empty) is added to the constant drive.
  void step(const Vector& extra_drive = Vector());

 private:
  Matrix drift_;
  Vector drive_;
  Matrix noise_factor_;
  Vector noise_diag_;
  bool diagonal_noise_ = true;
  bool zero_noise_ = false;
  double dt_;
  double sqrt_dt_;
  GaussianStream rng_;
  Vector state_, next_, normals_, noise_, drive_scratch_;
};

/// Simulates the driven Leontief economy starting from Y0, discarding
/// `burn_in` years before recording `horizon` years. Throws NumericalBlowup.
Trajectory simulate_trajectory(const IOTable& table, const Matrix& nu,
                               const ShockProfile& shock, const SimulationOptions& options);

/// Writes "t,Y_1,...,Y_N" rows at full double precision.
void write_trajectory(const Trajectory& trajectory, std::ostream& out);

}  // namespace lrt
