#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "lrt/dynamics.hpp"
#include "lrt/iodata.hpp"
#include "lrt/susceptibility.hpp"
#include "lrt/types.hpp"

namespace lrt {

/// Expected output change <dY_k(t')> per sector on a time grid relative to
/// the year the shock hits. values[g](k) is sector k at grid[g].
struct ResponseCurve {
  enum class Provenance { Analytic, MonteCarlo };

  std::vector<double> grid;
  std::vector<Vector> values;
  ShockProfile shock;
  Provenance provenance = Provenance::Analytic;
  std::optional<std::vector<Vector>> standard_errors;
};

/// Uniform grid 0, step, ..., horizon (endpoint included).
std::vector<double> uniform_grid(double horizon, double step);

/// exp((A - I) t') X. The grid must start at 0; +inf is allowed as last point.
ResponseCurve impulse_response(const IOTable& table, const Vector& x,
                               const std::vector<double>& grid);

/// rho(t') X with rho(t') = int_0^t' exp((A - I) tau) dtau; +inf as a grid
/// point evaluates the stationary limit (I - A)^{-1} X.
ResponseCurve step_response(const IOTable& table, const Vector& x,
                            const std::vector<double>& grid);

/// Trapezoid-rule convolution int exp(M (t - tau)) X(tau) dtau over a
/// tabulated shock. Every response time must be a shock grid time (or
/// precede it); otherwise GridMismatch.
ResponseCurve general_response(const IOTable& table, const ShockProfile& shock,
                               const std::vector<double>& grid);

struct ResponseMonteCarloOptions {
  double dt = 0.01;
  double length = 2000.0;
  double origin_stride = 0.1;
  std::size_t replicas = 4;
  double burn_in = 50.0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

/// Green-Kubo estimate C_hat(t') sigma_hat^{-1} X of the impulse response from
/// unshocked trajectories. Grid points must be multiples of dt.
ResponseCurve impulse_response_monte_carlo(const IOTable& table, const Matrix& nu,
                                           const Vector& x, const std::vector<double>& grid,
                                           const ResponseMonteCarloOptions& options);

inline constexpr double kNeverRecovers = std::numeric_limits<double>::infinity();

/// Per sector, the first grid time from which |dY_k| stays at or below
/// eps |X_k| (eps max|X| when X_k = 0) to the end of the grid;
/// kNeverRecovers if the final point is still above.
std::vector<double> recovery_time(const ResponseCurve& curve, double eps = 0.05);

struct ImpliedShockOptions {
  double condition_cap = 1e12;
  /// Tikhonov parameter relative to the largest singular value; 0 disables
  /// the fallback for ill-conditioned rho(t, 1).
  double ridge = 0.0;
};

struct ImpliedShock {
  int year = 0;
  Vector shock;
  double truncation = 1.0;
  double condition = 1.0;
  double round_trip_error = 0.0;  // |rho X - dY|_inf / |dY|_inf
  bool ridge_used = false;
};

/// X = rho(t, 1)^{-1} (Y(t+1) - Y(t)) by LU solve. Throws IllConditioned.
ImpliedShock implied_shock(const IOTable& table, const Vector& y_t, const Vector& y_next,
                           const ImpliedShockOptions& options = {});

struct LrtForecast {
  ImpliedShock shock;
  Vector one_year;  // Y(t) + rho(t, 1) X, reproduces Y(t+1)
  Vector two_year;  // Y(t) + rho(t, 2) X
};

LrtForecast lrt_forecast(const IOTable& table, const Vector& y_t, const Vector& y_next,
                         const ImpliedShockOptions& options = {});

/// eta * sum_i rho_ki Y_i(t0), with rho at the given horizon.
Vector fluctuation_prediction(const IOTable& table, double eta = 1.0,
                              double horizon = kInfiniteHorizon);

/// Mean annual output change over consecutive observations; signed by
/// default, mean absolute change when `absolute` is set.
Vector mean_output_change(const std::vector<Vector>& series, bool absolute = false);

struct FluctuationRegression {
  double eta = 0.0;        // slope through the origin of observed on predicted
  double r = 0.0;          // Pearson(predicted, observed)
  double r_size = 0.0;     // Pearson(size, observed)
  double r_control = 0.0;  // multiple correlation of observed ~ 1 + predicted + size
  double size_coefficient = 0.0;
  double size_coefficient_se = 0.0;
  std::size_t count = 0;
};

FluctuationRegression fluctuation_regression(const Vector& predicted, const Vector& size,
                                             const Vector& observed);

void write_curve(const ResponseCurve& curve, const std::vector<SectorId>& sectors,
                 std::ostream& out);

}  // namespace lrt
