#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lrt/baselines.hpp"
#include "lrt/error.hpp"

namespace lrt {
namespace {

constexpr double kBound = 0.999;

std::vector<double> difference(std::span<const double> x, int d) {
  std::vector<double> w(x.begin(), x.end());
  for (int k = 0; k < d; ++k) {
    std::vector<double> next;
    next.reserve(w.size());
    for (std::size_t t = 1; t < w.size(); ++t) next.push_back(w[t] - w[t - 1]);
    w = std::move(next);
  }
  return w;
}

struct Params {
  double phi = 0.0, theta = 0.0, c = 0.0;
};

// Conditional residuals with e = 0 before the first fitted point.
double css(const std::vector<double>& w, int p, int q, const Params& prm, double* last_e) {
  double ss = 0.0;
  double e_prev = 0.0;
  for (std::size_t t = static_cast<std::size_t>(p); t < w.size(); ++t) {
    double pred = prm.c;
    if (p) pred += prm.phi * w[t - 1];
    if (q) pred += prm.theta * e_prev;
    const double e = w[t] - pred;
    ss += e * e;
    e_prev = e;
  }
  if (last_e) *last_e = e_prev;
  return ss;
}

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

template <typename F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const std::vector<double>& step,
                             std::size_t max_evals) {
  const std::size_t dim = x0.size();
  NelderMeadResult res;
  if (dim == 0) {
    res.x = x0;
    res.f = f(x0);
    res.evaluations = 1;
    res.converged = true;
    return res;
  }
  std::vector<std::vector<double>> simplex(dim + 1, x0);
  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= dim; ++i) fv[i] = f(simplex[i]);
  std::size_t evals = dim + 1;

  std::vector<std::size_t> order(dim + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];

    double size = 0.0;
    for (std::size_t i = 0; i <= dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]) /
                                  std::max(1.0, std::abs(simplex[best][k])));
      }
    }
    const double spread = std::abs(fv[worst] - fv[best]);
    if ((spread <= 1e-13 * (std::abs(fv[best]) + 1e-300) && size <= 1e-8) || size <= 1e-12 ||
        fv[worst] == fv[best]) {
      res.converged = std::isfinite(fv[best]);
      break;
    }
    if (evals >= max_evals) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / static_cast<double>(dim);
    }
    auto along = [&](double coef) {
      std::vector<double> p(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        p[k] = centroid[k] + coef * (simplex[worst][k] - centroid[k]);
      }
      return p;
    };
    const auto xr = along(-1.0);
    const double fr = f(xr);
    ++evals;
    if (fr < fv[best]) {
      const auto xe = along(-2.0);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const auto xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      ++evals;
      if (fc < (outside ? fr : fv[worst])) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < dim; ++k) {
            simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
          }
          fv[i] = f(simplex[i]);
          ++evals;
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i) {
    if (fv[i] < fv[best]) best = i;
  }
  res.x = simplex[best];
  res.f = fv[best];
  res.evaluations = evals;
  return res;
}

}  // namespace

ArimaModel fit_arima(std::span<const double> series, ArimaOrder order,
                     const ArimaFitOptions& options) {
  auto valid = [](int v) { return v == 0 || v == 1; };
  if (!valid(order.p) || !valid(order.d) || !valid(order.q)) {
    throw Error(ErrorCode::InvalidArgument, "ARIMA orders must each be 0 or 1");
  }
  const std::size_t need = static_cast<std::size_t>(order.p + order.d + order.q + 3);
  if (series.size() < need) {
    throw Error(ErrorCode::TooShortSeries, "series of length " + std::to_string(series.size()) +
                                               " is shorter than " + std::to_string(need));
  }
  for (double v : series) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite value in series");
  }
  const auto w = difference(series, order.d);
  const int p = order.p;
  const int q = options.fixed_theta ? 0 : order.q;
  const bool use_theta = order.q == 1;

  double w_mean = 0.0;
  for (double v : w) w_mean += v;
  w_mean /= static_cast<double>(w.size());
  double w_sd = 0.0;
  for (double v : w) w_sd += (v - w_mean) * (v - w_mean);
  w_sd = std::sqrt(w_sd / static_cast<double>(w.size()));

  // Parameter vector layout: [phi][theta][c].
  auto unpack = [&](const std::vector<double>& x) {
    Params prm;
    std::size_t k = 0;
    if (p) prm.phi = x[k++];
    if (q) prm.theta = x[k++];
    if (options.fixed_theta) prm.theta = *options.fixed_theta;
    if (options.include_constant) prm.c = x[k++];
    return prm;
  };
  auto objective = [&](const std::vector<double>& x) {
    const Params prm = unpack(x);
    if (std::abs(prm.phi) >= 1.0 || std::abs(prm.theta) >= 1.0) {
      return std::numeric_limits<double>::infinity();
    }
    return css(w, p, use_theta ? 1 : 0, prm, nullptr);
  };

  const std::vector<double> starts{0.0, -0.5, 0.5};
  const std::vector<double> phi_starts = p ? starts : std::vector<double>{0.0};
  const std::vector<double> theta_starts = q ? starts : std::vector<double>{0.0};
  const double c_step = std::max({0.1 * std::abs(w_mean), 0.1 * w_sd, 1e-8});

  NelderMeadResult best;
  best.f = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  for (double phi0 : phi_starts) {
    for (double theta0 : theta_starts) {
      std::vector<double> x0, step;
      if (p) {
        x0.push_back(phi0);
        step.push_back(0.1);
      }
      if (q) {
        x0.push_back(theta0);
        step.push_back(0.1);
      }
      if (options.include_constant) {
        x0.push_back(w_mean * (1.0 - phi0));
        step.push_back(c_step);
      }
      auto r = nelder_mead(objective, x0, step, options.max_evaluations);
      evaluations += r.evaluations;
      if (r.f < best.f) best = std::move(r);
    }
  }
  if (!std::isfinite(best.f)) {
    throw Error(ErrorCode::NonConvergent, "CSS objective not finite after " +
                                              std::to_string(evaluations) + " evaluations");
  }

  const Params prm = unpack(best.x);
  ArimaModel model;
  model.order = order;
  model.phi = prm.phi;
  model.theta = use_theta ? prm.theta : 0.0;
  model.constant = prm.c;
  if (std::abs(model.phi) > kBound) {
    model.phi = std::copysign(kBound, model.phi);
    model.clamped = true;
  }
  if (std::abs(model.theta) > kBound) {
    model.theta = std::copysign(kBound, model.theta);
    model.clamped = true;
  }
  model.objective = best.f;
  model.converged = best.converged;
  model.evaluations = evaluations;
  const std::size_t fitted = w.size() - static_cast<std::size_t>(p);
  model.sigma2 = best.f / static_cast<double>(std::max<std::size_t>(fitted, 1));
  return model;
}

std::vector<double> arima_forecast(const ArimaModel& model, std::span<const double> series,
                                   std::size_t steps) {
  const auto w = difference(series, model.order.d);
  if (w.size() < static_cast<std::size_t>(model.order.p) + 1) {
    throw Error(ErrorCode::TooShortSeries, "series too short for forecasting");
  }
  Params prm{model.phi, model.theta, model.constant};
  double last_e = 0.0;
  css(w, model.order.p, model.order.q, prm, &last_e);

  std::vector<double> out;
  out.reserve(steps);
  double w_prev = w.back();
  double level = series.back();
  for (std::size_t h = 1; h <= steps; ++h) {
    double w_hat = model.constant;
    if (model.order.p) w_hat += model.phi * w_prev;
    if (model.order.q && h == 1) w_hat += model.theta * last_e;
    w_prev = w_hat;
    if (model.order.d == 1) {
      level += w_hat;
      out.push_back(level);
    } else {
      out.push_back(w_hat);
    }
  }
  return out;
}

}  // namespace lrt
