#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrt/iodata.hpp"
#include "lrt/types.hpp"

namespace lrt {

// ---------------------------------------------------------------- ARIMA ---

struct ArimaOrder {
  int p = 1;
  int d = 1;
  int q = 1;
};

/// w_t = c + phi w_{t-1} + e_t + theta e_{t-1} on the d-times differenced
/// series, p, d, q in {0, 1}.
struct ArimaModel {
  ArimaOrder order;
  double phi = 0.0;
  double theta = 0.0;
  double constant = 0.0;
  double sigma2 = 0.0;
  bool converged = false;
  bool clamped = false;
  double objective = 0.0;
  std::size_t evaluations = 0;
};

struct ArimaFitOptions {
  bool include_constant = true;
  std::optional<double> fixed_theta;  // hold the MA coefficient at this value
  std::size_t max_evaluations = 4000;
};

/// Conditional-sum-of-squares fit by Nelder-Mead from the start grid
/// {-0.5, 0, 0.5} per coefficient. Throws TooShortSeries, NonConvergent.
ArimaModel fit_arima(std::span<const double> series, ArimaOrder order,
                     const ArimaFitOptions& options = {});

/// Minimum-MSE forecasts for steps 1..steps after the end of `series`.
std::vector<double> arima_forecast(const ArimaModel& model, std::span<const double> series,
                                   std::size_t steps);

// ------------------------------------------------------------------ VAR ---

struct VarModel {
  Matrix ar;
  Vector intercept;
  Matrix ar_stderr;
  int calibration_year = 0;
  std::size_t samples = 0;
};

struct VarFitOptions {
  double dt = 0.01;
  double burn_in = 50.0;
  double interval = 1.0;  // years between recorded observations
};

/// Simulates the unshocked economy, records `samples` yearly observations and
/// fits Y(t+1) = AR Y(t) + e by least squares. Throws RankDeficientRegressors.
VarModel fit_var1(const IOTable& table, const Matrix& nu, std::size_t samples,
                  std::uint64_t seed, const VarFitOptions& options = {});

/// Least-squares VAR(1) on an explicit sample (rows are observations).
VarModel fit_var1_ols(const std::vector<Vector>& observations);

/// Iterates the fitted map `steps` times from `y`.
std::vector<Vector> var_forecast(const VarModel& model, const Vector& y, std::size_t steps);

// --------------------------------------------------------- perturbed IO ---

/// (I - A)^{-1} X. Throws SingularSystem.
Vector perturbed_io_forecast(const IOTable& table, const Vector& shock);

// ----------------------------------------------------------- evaluation ---

enum class EvaluationTarget { Levels, Changes };

/// Aligned observed and predicted outputs for one country and target year.
/// `reference` is the last observed output before the target year; it is
/// subtracted from everything when evaluating changes.
struct ForecastCell {
  std::string country;
  int year = 0;
  Vector observed;
  Vector lrt;
  Vector baseline;
  Vector reference;
};

struct CellEvaluation {
  std::string country;
  int year = 0;
  double r_lrt = 0.0;
  double r_baseline = 0.0;
  double pg = 0.0;
};

struct PgSummary {
  int year = 0;  // 0 for the pooled line
  std::size_t n = 0;
  double mean_pg = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 0.0;
  bool degenerate = false;
};

struct ForecastEvaluation {
  std::vector<CellEvaluation> cells;
  std::vector<PgSummary> years;
  PgSummary pooled;
  std::vector<double> histogram_edges;
  std::vector<std::size_t> histogram;
  std::size_t skipped_cells = 0;
};

/// Pearson r across sectors per cell, PG = r_LRT - r_baseline, one-sample t
/// tests per year and pooled. Zero-variance PG samples are flagged degenerate
/// (p-value NaN). Throws MisalignedPanel.
ForecastEvaluation evaluate_forecasts(const std::vector<ForecastCell>& cells,
                                      EvaluationTarget target = EvaluationTarget::Changes);

void write_evaluation(const ForecastEvaluation& eval, std::ostream& out);

}  // namespace lrt
