#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrt/iodata.hpp"
#include "lrt/types.hpp"

namespace lrt {

inline constexpr double kInfiniteHorizon = std::numeric_limits<double>::infinity();

struct MonteCarloOptions {
  double dt = 0.01;
  double length = 1.0e4;  // recorded years per replica, after burn-in
  std::size_t replicas = 4;
  double burn_in = 50.0;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  bool standard_errors = true;
};

/// rho_ki: output change of sector k per unit step demand shock in sector i,
/// integrated up to `horizon` years (infinite for the stationary response).
struct SusceptibilityMatrix {
  enum class Method { Analytic, MonteCarlo };

  Matrix values;
  std::string country;
  int year = 0;
  double horizon = kInfiniteHorizon;
  Method method = Method::Analytic;
  std::optional<MonteCarloOptions> monte_carlo;
  std::optional<Matrix> standard_errors;
};

/// Closed form of the centered Green-Kubo integral:
/// rho(T) = int_0^T exp((A - I) tau) dtau, rho(inf) = (I - A)^{-1}.
/// Independent of the noise covariance.
SusceptibilityMatrix susceptibility_analytic(const IOTable& table, double horizon);

/// Green-Kubo estimate from unshocked simulated trajectories:
/// rho_hat = [int_0^T C_hat(tau) dtau] sigma_hat^{-1}, with centered
/// correlations accumulated over all time origins and the lag integral taken
/// by the trapezoid rule on the dt grid. Replica spread gives standard errors.
SusceptibilityMatrix susceptibility_monte_carlo(const IOTable& table, const Matrix& nu,
                                                double horizon,
                                                const MonteCarloOptions& options);

/// Lower-level entry point: Green-Kubo estimate for drift M = A - I on one
/// replica. Exposed for tests and benchmarks.
Matrix green_kubo_replica(const Matrix& drift, const Matrix& nu, double horizon, double dt,
                          double length, double burn_in, std::uint64_t seed);

enum class SumConvention {
  SecondIndex,  // s_i = sum_j rho_ij
  FirstIndex,   // s_j = sum_i rho_ij
};

Vector sector_susceptibility(const SusceptibilityMatrix& rho,
                             SumConvention convention = SumConvention::SecondIndex);

/// One panel cell of sector susceptibilities with the matching outputs.
struct SectorSusceptibilityCell {
  std::string country;
  int year = 0;
  Vector sector;
  Vector output;
};

struct WeightedSusceptibility {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct SusceptibilityAggregates {
  std::map<std::string, double> country_average;
  std::vector<WeightedSusceptibility> weighted_sector;
};

/// Country averages over sectors and years, and output-weighted sector means
/// over all (country, year) cells with normal-approximation 95% intervals.
/// Throws MissingPanelCell if any requested (country, year) is absent.
SusceptibilityAggregates aggregate_susceptibilities(
    const std::vector<SectorSusceptibilityCell>& cells, const std::vector<std::string>& countries,
    const std::vector<int>& years);

void write_susceptibility_matrix(const SusceptibilityMatrix& rho,
                                 const std::vector<SectorId>& sectors, std::ostream& out);
void write_aggregates(const SusceptibilityAggregates& agg, const std::vector<SectorId>& sectors,
                      std::ostream& out);

}  // namespace lrt
