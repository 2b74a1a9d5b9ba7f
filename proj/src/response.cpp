#include "lrt/response.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <ostream>

#include "lrt/error.hpp"
#include "lrt/linalg.hpp"
#include "lrt/parallel.hpp"
#include "lrt/simd/kernels.hpp"
#include "lrt/stats.hpp"
#include "lrt/textio.hpp"

namespace lrt {
namespace {

// Grid values are propagated from cached one-step exponentials and
// re-anchored with a direct evaluation every kAnchor points and at the end.
constexpr std::size_t kAnchor = 32;

void check_grid(const std::vector<double>& grid) {
  if (grid.empty() || grid.front() != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "response grid must start at 0");
  }
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (!(grid[g] > grid[g - 1])) {
      throw Error(ErrorCode::InvalidArgument, "response grid must be strictly increasing");
    }
  }
}

class ExpCache {
 public:
  explicit ExpCache(Matrix drift) : drift_(std::move(drift)) {}

  const linalg::IntegratedExp& at(double h) {
    std::uint64_t bits;
    std::memcpy(&bits, &h, sizeof bits);
    auto it = cache_.find(bits);
    if (it == cache_.end()) it = cache_.emplace(bits, linalg::integrated_expm(drift_, h)).first;
    return it->second;
  }

  const Matrix& drift() const { return drift_; }

 private:
  Matrix drift_;
  std::map<std::uint64_t, linalg::IntegratedExp> cache_;
};

// Fills impulse (exp(M t) X) and/or step (rho(t) X) values on the grid.
void propagate(const IOTable& table, const Vector& x, const std::vector<double>& grid,
               std::vector<Vector>* impulse, std::vector<Vector>* step) {
  check_grid(grid);
  const auto n = static_cast<Eigen::Index>(table.size());
  if (x.size() != n) throw Error(ErrorCode::InvalidArgument, "shock vector has wrong length");
  ExpCache cache(table.drift());
  Vector u = x;                    // exp(M t) X
  Vector s = Vector::Zero(n);      // rho(t) X
  std::size_t since_anchor = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid[g];
    if (std::isinf(t)) {
      u.setZero();
      s = linalg::CheckedLu(Matrix::Identity(n, n) - table.coefficients).solve(x);
    } else if (g == 0) {
      u = x;
      s.setZero();
    } else {
      const bool last = g + 1 == grid.size() || std::isinf(grid[g + 1]);
      if (++since_anchor >= kAnchor || last) {
        const auto direct = linalg::integrated_expm(cache.drift(), t);
        u = direct.exp * x;
        s = direct.integral * x;
        since_anchor = 0;
      } else {
        const auto& e = cache.at(t - grid[g - 1]);
        s += e.integral * u;
        u = e.exp * u;
      }
    }
    if (impulse) impulse->push_back(u);
    if (step) step->push_back(s);
  }
}

}  // namespace

std::vector<double> uniform_grid(double horizon, double step) {
  if (!(step > 0.0) || !(horizon >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid step must be positive and horizon non-negative");
  }
  const auto count = static_cast<std::size_t>(std::llround(horizon / step));
  std::vector<double> grid(count + 1);
  for (std::size_t g = 0; g <= count; ++g) grid[g] = static_cast<double>(g) * step;
  if (count > 0) grid.back() = horizon;
  return grid;
}

ResponseCurve impulse_response(const IOTable& table, const Vector& x,
                               const std::vector<double>& grid) {
  ResponseCurve curve;
  curve.grid = grid;
  curve.shock = ShockProfile::impulse(x, 0.0);
  propagate(table, x, grid, &curve.values, nullptr);
  return curve;
}

ResponseCurve step_response(const IOTable& table, const Vector& x,
                            const std::vector<double>& grid) {
  ResponseCurve curve;
  curve.grid = grid;
  curve.shock = ShockProfile::step(x, 0.0);
  propagate(table, x, grid, nullptr, &curve.values);
  return curve;
}

ResponseCurve general_response(const IOTable& table, const ShockProfile& shock,
                               const std::vector<double>& grid) {
  if (shock.kind != ShockProfile::Kind::Tabulated) {
    throw Error(ErrorCode::InvalidArgument, "general_response needs a tabulated shock");
  }
  const std::size_t n = table.size();
  shock.validate(n);
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (!(grid[g] > grid[g - 1])) {
      throw Error(ErrorCode::InvalidArgument, "response grid must be strictly increasing");
    }
  }
  const auto& times = shock.times;

  // Match each response time to a shock grid index (or "before the shock").
  std::vector<std::ptrdiff_t> match(grid.size(), -1);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid[g];
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    if (t < times.front() - tol) continue;
    auto it = std::lower_bound(times.begin(), times.end(), t - tol);
    if (it == times.end() || std::abs(*it - t) > tol) {
      throw Error(ErrorCode::GridMismatch,
                  "response time " + textio::fmt(t) + " is not on the shock grid");
    }
    match[g] = it - times.begin();
  }

  ExpCache cache(table.drift());
  std::vector<Vector> at_shock_grid;
  at_shock_grid.reserve(times.size());
  Vector r = Vector::Zero(static_cast<Eigen::Index>(n));
  at_shock_grid.push_back(r);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double h = times[k + 1] - times[k];
    const Matrix& e = cache.at(h).exp;
    r = e * (r + 0.5 * h * shock.values[k]) + 0.5 * h * shock.values[k + 1];
    at_shock_grid.push_back(r);
  }

  ResponseCurve curve;
  curve.grid = grid;
  curve.shock = shock;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    curve.values.push_back(match[g] < 0 ? Vector::Zero(static_cast<Eigen::Index>(n))
                                        : at_shock_grid[static_cast<std::size_t>(match[g])]);
  }
  return curve;
}

ResponseCurve impulse_response_monte_carlo(const IOTable& table, const Matrix& nu,
                                           const Vector& x, const std::vector<double>& grid,
                                           const ResponseMonteCarloOptions& options) {
  check_grid(grid);
  const auto n = static_cast<Eigen::Index>(table.size());
  const auto un = static_cast<std::size_t>(n);
  if (x.size() != n) throw Error(ErrorCode::InvalidArgument, "shock vector has wrong length");
  if (options.replicas == 0) throw Error(ErrorCode::InsufficientSamples, "no replicas requested");
  std::vector<long long> lags;
  for (double t : grid) {
    const double q = t / options.dt;
    const auto k = std::llround(q);
    if (!std::isfinite(t) || std::abs(q - static_cast<double>(k)) > 1e-6) {
      throw Error(ErrorCode::GridMismatch, "Monte Carlo grid points must be multiples of dt");
    }
    lags.push_back(k);
  }
  const long long max_lag = lags.back();
  const auto stride = std::max<long long>(1, std::llround(options.origin_stride / options.dt));
  const auto steps = std::llround(options.length / options.dt);
  if (steps <= max_lag) {
    throw Error(ErrorCode::InsufficientSamples, "trajectory shorter than the response horizon");
  }
  const Matrix drift = table.drift();
  const auto& kern = simd::active_kernels();

  std::vector<std::vector<Vector>> replicas(options.replicas);
  parallel_for(options.replicas, options.workers, [&](std::size_t rep) {
    EulerMaruyama em(drift, Vector::Zero(n), nu, options.dt, derive_seed(options.seed, rep));
    const auto burn = std::llround(options.burn_in / options.dt);
    for (long long k = 0; k < burn; ++k) em.step();
    const Eigen::Index width = max_lag + 1;
    Matrix ring(n, width);
    std::vector<Matrix> corr(grid.size(), Matrix::Zero(n, n));
    Matrix c0 = Matrix::Zero(n, n);
    for (long long u = 0; u <= steps; ++u) {
      if (u > 0) em.step();
      ring.col(u % width) = em.state();
      const long long s = u - max_lag;
      if (s < 0 || s % stride != 0) continue;
      const double* origin = ring.col(s % width).data();
      kern.rank1_update(c0.data(), origin, origin, un);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        kern.rank1_update(corr[g].data(), ring.col((s + lags[g]) % width).data(), origin, un);
      }
    }
    const linalg::CheckedLu lu(c0, 1e-13);
    const Vector w = lu.solve(x);  // sigma_hat^{-1} X up to the common count
    std::vector<Vector> values;
    for (const auto& c : corr) values.push_back(c * w);
    replicas[rep] = std::move(values);
  });

  ResponseCurve curve;
  curve.grid = grid;
  curve.shock = ShockProfile::impulse(x, 0.0);
  curve.provenance = ResponseCurve::Provenance::MonteCarlo;
  const double count = static_cast<double>(options.replicas);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    Vector m = Vector::Zero(n);
    for (const auto& rep : replicas) m += rep[g];
    curve.values.push_back(m / count);
  }
  if (options.replicas >= 2) {
    std::vector<Vector> se;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      Vector v = Vector::Zero(n);
      for (const auto& rep : replicas) v += (rep[g] - curve.values[g]).cwiseAbs2();
      se.push_back((v / (count - 1.0) / count).cwiseSqrt());
    }
    curve.standard_errors = std::move(se);
  }
  return curve;
}

std::vector<double> recovery_time(const ResponseCurve& curve, double eps) {
  if (curve.values.empty()) return {};
  const auto n = curve.values.front().size();
  Vector applied = Vector::Zero(n);
  switch (curve.shock.kind) {
    case ShockProfile::Kind::Impulse:
    case ShockProfile::Kind::Step:
      applied = curve.shock.magnitude.cwiseAbs();
      break;
    case ShockProfile::Kind::Tabulated:
      for (const auto& v : curve.shock.values) applied = applied.cwiseMax(v.cwiseAbs());
      break;
    case ShockProfile::Kind::None:
      break;
  }
  const double largest = applied.size() ? applied.maxCoeff() : 0.0;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double threshold = eps * (applied(k) != 0.0 ? applied(k) : largest);
    std::ptrdiff_t last_above = -1;
    for (std::size_t g = 0; g < curve.values.size(); ++g) {
      if (std::abs(curve.values[g](k)) > threshold) last_above = static_cast<std::ptrdiff_t>(g);
    }
    if (last_above < 0) {
      out[static_cast<std::size_t>(k)] = curve.grid.front();
    } else if (static_cast<std::size_t>(last_above) + 1 == curve.grid.size()) {
      out[static_cast<std::size_t>(k)] = kNeverRecovers;
    } else {
      out[static_cast<std::size_t>(k)] = curve.grid[static_cast<std::size_t>(last_above) + 1];
    }
  }
  return out;
}

ImpliedShock implied_shock(const IOTable& table, const Vector& y_t, const Vector& y_next,
                           const ImpliedShockOptions& options) {
  const auto n = static_cast<Eigen::Index>(table.size());
  if (y_t.size() != n || y_next.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "output vectors have wrong length");
  }
  const Matrix rho1 = linalg::integrated_expm(table.drift(), 1.0).integral;
  const Vector dy = y_next - y_t;

  ImpliedShock out;
  out.year = table.year;
  Eigen::PartialPivLU<Matrix> lu(rho1);
  const double rcond = lu.rcond();
  out.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(out.condition <= options.condition_cap)) {
    if (!(options.ridge > 0.0)) {
      throw Error(ErrorCode::IllConditioned, "rho(t,1) condition estimate " +
                                                 textio::fmt(out.condition) + " exceeds cap " +
                                                 textio::fmt(options.condition_cap));
    }
    Eigen::JacobiSVD<Matrix> svd(rho1);
    const double lambda = options.ridge * svd.singularValues()(0);
    const Matrix normal = rho1.transpose() * rho1 + lambda * lambda * Matrix::Identity(n, n);
    out.shock = normal.ldlt().solve(rho1.transpose() * dy);
    out.ridge_used = true;
  } else {
    out.shock = lu.solve(dy);
    // One refinement step keeps the round trip at working precision.
    out.shock += lu.solve(Vector(dy - rho1 * out.shock));
  }
  const double scale = dy.cwiseAbs().maxCoeff();
  const double resid = (rho1 * out.shock - dy).cwiseAbs().maxCoeff();
  out.round_trip_error = scale > 0.0 ? resid / scale : resid;
  return out;
}

LrtForecast lrt_forecast(const IOTable& table, const Vector& y_t, const Vector& y_next,
                         const ImpliedShockOptions& options) {
  LrtForecast f;
  f.shock = implied_shock(table, y_t, y_next, options);
  const Matrix drift = table.drift();
  const Matrix rho1 = linalg::integrated_expm(drift, 1.0).integral;
  const Matrix rho2 = linalg::integrated_expm(drift, 2.0).integral;
  f.one_year = y_t + rho1 * f.shock.shock;
  f.two_year = y_t + rho2 * f.shock.shock;
  return f;
}

Vector fluctuation_prediction(const IOTable& table, double eta, double horizon) {
  const auto rho = susceptibility_analytic(table, horizon);
  return eta * (rho.values * table.output);
}

Vector mean_output_change(const std::vector<Vector>& series, bool absolute) {
  if (series.size() < 2) {
    throw Error(ErrorCode::TooShortSeries, "need at least two observations for output changes");
  }
  Vector acc = Vector::Zero(series.front().size());
  for (std::size_t t = 0; t + 1 < series.size(); ++t) {
    const Vector d = series[t + 1] - series[t];
    acc += absolute ? Vector(d.cwiseAbs()) : d;
  }
  return acc / static_cast<double>(series.size() - 1);
}

FluctuationRegression fluctuation_regression(const Vector& predicted, const Vector& size,
                                             const Vector& observed) {
  const auto m = predicted.size();
  if (size.size() != m || observed.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "regression inputs differ in length");
  }
  FluctuationRegression out;
  out.count = static_cast<std::size_t>(m);
  const std::span<const double> p(predicted.data(), out.count);
  const std::span<const double> s(size.data(), out.count);
  const std::span<const double> o(observed.data(), out.count);
  out.r = stats::pearson_r(p, o);
  out.r_size = stats::pearson_r(s, o);
  out.eta = predicted.dot(observed) / predicted.squaredNorm();

  Matrix x(m, 3);
  x.col(0).setOnes();
  x.col(1) = predicted;
  x.col(2) = size;
  const Eigen::ColPivHouseholderQR<Matrix> qr(x);
  if (qr.rank() < 3) {
    throw Error(ErrorCode::RankDeficientRegressors, "prediction and size are collinear");
  }
  const Vector beta = qr.solve(observed);
  const Vector fitted = x * beta;
  const Vector resid = observed - fitted;
  const double tss = (observed.array() - observed.mean()).square().sum();
  const double r2 = 1.0 - resid.squaredNorm() / tss;
  out.r_control = std::sqrt(std::max(0.0, r2));
  out.size_coefficient = beta(2);
  if (m > 3) {
    const double s2 = resid.squaredNorm() / static_cast<double>(m - 3);
    const Matrix xtx_inv = (x.transpose() * x).inverse();
    out.size_coefficient_se = std::sqrt(s2 * xtx_inv(2, 2));
  }
  return out;
}

void write_curve(const ResponseCurve& curve, const std::vector<SectorId>& sectors,
                 std::ostream& out) {
  const bool se = curve.standard_errors.has_value();
  out << "t_prime,sector,value" << (se ? ",stderr" : "") << '\n';
  for (std::size_t g = 0; g < curve.grid.size(); ++g) {
    for (std::size_t k = 0; k < sectors.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      out << textio::fmt(curve.grid[g]) << ',' << sectors[k].code << ','
          << textio::fmt(curve.values[g](i));
      if (se) out << ',' << textio::fmt((*curve.standard_errors)[g](i));
      out << '\n';
    }
  }
}

}  // namespace lrt
