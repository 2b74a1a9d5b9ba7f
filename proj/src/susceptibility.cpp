#include "lrt/susceptibility.hpp"

#include <cmath>
#include <ostream>
#include <set>

#include "lrt/dynamics.hpp"
#include "lrt/error.hpp"
#include "lrt/linalg.hpp"
#include "lrt/parallel.hpp"
#include "lrt/simd/kernels.hpp"
#include "lrt/textio.hpp"

namespace lrt {

SusceptibilityMatrix susceptibility_analytic(const IOTable& table, double horizon) {
  if (!(horizon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "susceptibility horizon must be positive");
  }
  const auto n = static_cast<Eigen::Index>(table.size());
  SusceptibilityMatrix rho;
  rho.country = table.country;
  rho.year = table.year;
  rho.horizon = horizon;
  rho.method = SusceptibilityMatrix::Method::Analytic;
  if (std::isinf(horizon)) {
    const linalg::CheckedLu lu(Matrix::Identity(n, n) - table.coefficients);
    rho.values = lu.inverse();
  } else {
    rho.values = linalg::integrated_expm(table.drift(), horizon).integral;
  }
  return rho;
}

Matrix green_kubo_replica(const Matrix& drift, const Matrix& nu, double horizon, double dt,
                          double length, double burn_in, std::uint64_t seed) {
  const auto n = drift.rows();
  const auto un = static_cast<std::size_t>(n);
  const auto lags = static_cast<Eigen::Index>(std::llround(horizon / dt));
  const auto steps = static_cast<long long>(std::llround(length / dt));
  if (steps < lags) {
    throw Error(ErrorCode::InsufficientSamples,
                "trajectory length " + textio::fmt(length) + " is shorter than the horizon");
  }
  const auto& kern = simd::active_kernels();

  EulerMaruyama em(drift, Vector::Zero(n), nu, dt, seed);
  const auto burn_steps = std::llround(burn_in / dt);
  for (long long k = 0; k < burn_steps; ++k) em.step();

  const Eigen::Index width = lags + 1;
  Matrix ring(n, width);
  Vector window_sum = Vector::Zero(n);
  Vector weighted(n);
  Matrix c0 = Matrix::Zero(n, n);
  Matrix c_int = Matrix::Zero(n, n);
  long long origins = 0;

  for (long long u = 0; u <= steps; ++u) {
    if (u > 0) em.step();
    const Vector& y = em.state();
    if ((u & 4095) == 0 && !y.allFinite()) {
      throw Error(ErrorCode::NumericalBlowup, "non-finite state in Green-Kubo simulation");
    }
    double* slot = ring.col(u % width).data();
    std::copy(y.data(), y.data() + n, slot);
    kern.axpy(1.0, slot, window_sum.data(), un);
    if (u < lags) continue;

    const double* origin = ring.col((u - lags) % width).data();
    // Trapezoid over lags 0..K: full sum minus half of both end points.
    for (Eigen::Index i = 0; i < n; ++i) {
      weighted(i) = dt * (window_sum(i) - 0.5 * origin[i] - 0.5 * slot[i]);
    }
    kern.rank1_update(c0.data(), origin, origin, un);
    kern.rank1_update(c_int.data(), weighted.data(), origin, un);
    kern.axpy(-1.0, origin, window_sum.data(), un);
    ++origins;

    // Re-sum the window now and then so the running sum cannot drift.
    if ((origins & 8191) == 0) {
      window_sum.setZero();
      for (long long v = u - lags + 1; v <= u; ++v) {
        kern.axpy(1.0, ring.col(v % width).data(), window_sum.data(), un);
      }
    }
  }
  const linalg::CheckedLu lu(c0, 1e-13);
  return lu.solve(Matrix(c_int.transpose())).transpose();
}

SusceptibilityMatrix susceptibility_monte_carlo(const IOTable& table, const Matrix& nu,
                                                double horizon,
                                                const MonteCarloOptions& options) {
  if (!std::isfinite(horizon) || horizon < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "Monte Carlo susceptibility needs a finite horizon");
  }
  if (!(options.dt > 0.0) || !(options.length > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dt and trajectory length must be positive");
  }
  if (options.replicas == 0 || (options.standard_errors && options.replicas < 2)) {
    throw Error(ErrorCode::InsufficientSamples,
                "standard errors need at least 2 replicas, got " +
                    std::to_string(options.replicas));
  }
  const Matrix drift = table.drift();
  std::vector<Matrix> estimates(options.replicas);
  parallel_for(options.replicas, options.workers, [&](std::size_t r) {
    estimates[r] = green_kubo_replica(drift, nu, horizon, options.dt, options.length,
                                      options.burn_in, derive_seed(options.seed, r));
  });

  const auto n = drift.rows();
  Matrix mean = Matrix::Zero(n, n);
  for (const auto& e : estimates) mean += e;
  mean /= static_cast<double>(estimates.size());

  SusceptibilityMatrix rho;
  rho.values = mean;
  rho.country = table.country;
  rho.year = table.year;
  rho.horizon = horizon;
  rho.method = SusceptibilityMatrix::Method::MonteCarlo;
  rho.monte_carlo = options;
  if (estimates.size() >= 2) {
    Matrix var = Matrix::Zero(n, n);
    for (const auto& e : estimates) var += (e - mean).cwiseAbs2();
    var /= static_cast<double>(estimates.size() - 1);
    rho.standard_errors = (var / static_cast<double>(estimates.size())).cwiseSqrt();
  }
  return rho;
}

Vector sector_susceptibility(const SusceptibilityMatrix& rho, SumConvention convention) {
  if (convention == SumConvention::SecondIndex) return rho.values.rowwise().sum();
  return rho.values.colwise().sum().transpose();
}

SusceptibilityAggregates aggregate_susceptibilities(
    const std::vector<SectorSusceptibilityCell>& cells, const std::vector<std::string>& countries,
    const std::vector<int>& years) {
  std::map<CountryYear, const SectorSusceptibilityCell*> index;
  for (const auto& c : cells) index[CountryYear{c.country, c.year}] = &c;

  std::vector<const SectorSusceptibilityCell*> used;
  std::string missing;
  for (const auto& country : countries) {
    for (int year : years) {
      auto it = index.find(CountryYear{country, year});
      if (it == index.end()) {
        missing += (missing.empty() ? "" : " ") + country + "/" + std::to_string(year);
      } else {
        used.push_back(it->second);
      }
    }
  }
  if (!missing.empty()) throw Error(ErrorCode::MissingPanelCell, "absent cells: " + missing);
  if (used.empty()) throw Error(ErrorCode::MissingPanelCell, "no cells requested");

  const Eigen::Index n = used.front()->sector.size();
  for (const auto* c : used) {
    if (c->sector.size() != n || c->output.size() != n) {
      throw Error(ErrorCode::MisalignedPanel, "cells disagree on the number of sectors");
    }
  }

  SusceptibilityAggregates agg;
  for (const auto& country : countries) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto* c : used) {
      if (c->country != country) continue;
      sum += c->sector.sum();
      count += static_cast<std::size_t>(n);
    }
    agg.country_average[country] = sum / static_cast<double>(count);
  }

  agg.weighted_sector.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double w_sum = 0.0, w2_sum = 0.0, wx_sum = 0.0;
    for (const auto* c : used) {
      const double w = c->output(i);
      w_sum += w;
      w2_sum += w * w;
      wx_sum += w * c->sector(i);
    }
    WeightedSusceptibility& out = agg.weighted_sector[static_cast<std::size_t>(i)];
    if (!(w_sum > 0.0)) {
      // No output anywhere: fall back to equal weights.
      double s = 0.0;
      for (const auto* c : used) s += c->sector(i);
      out.value = out.ci_low = out.ci_high = s / static_cast<double>(used.size());
      continue;
    }
    const double mean = wx_sum / w_sum;
    double ss = 0.0;
    for (const auto* c : used) {
      const double d = c->sector(i) - mean;
      ss += c->output(i) * d * d;
    }
    const double sd = std::sqrt(ss / w_sum);
    const double n_eff = w_sum * w_sum / w2_sum;
    const double half = 1.959963984540054 * sd / std::sqrt(n_eff);
    out.value = mean;
    out.ci_low = mean - half;
    out.ci_high = mean + half;
  }
  return agg;
}

void write_susceptibility_matrix(const SusceptibilityMatrix& rho,
                                 const std::vector<SectorId>& sectors, std::ostream& out) {
  const bool se = rho.standard_errors.has_value();
  out << "row_sector,col_sector,value" << (se ? ",stderr" : "") << '\n';
  for (Eigen::Index i = 0; i < rho.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.values.cols(); ++j) {
      out << sectors[static_cast<std::size_t>(i)].code << ','
          << sectors[static_cast<std::size_t>(j)].code << ',' << textio::fmt(rho.values(i, j));
      if (se) out << ',' << textio::fmt((*rho.standard_errors)(i, j));
      out << '\n';
    }
  }
}

void write_aggregates(const SusceptibilityAggregates& agg, const std::vector<SectorId>& sectors,
                      std::ostream& out) {
  out << "sector,rho,ci_low,ci_high\n";
  for (std::size_t i = 0; i < agg.weighted_sector.size(); ++i) {
    const auto& w = agg.weighted_sector[i];
    out << sectors[i].code << ',' << textio::fmt(w.value) << ',' << textio::fmt(w.ci_low) << ','
        << textio::fmt(w.ci_high) << '\n';
  }
}

}  // namespace lrt
