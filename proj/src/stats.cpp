#include "lrt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "lrt/error.hpp"

namespace lrt::stats {

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::InvalidArgument, "pearson_r: sequences differ in length");
  }
  if (x.size() < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "pearson_r: need at least 3 points, got " + std::to_string(x.size()));
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorCode::DegenerateInput, "pearson_r: constant sequence");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double student_t_two_sided_p(double t, double df) {
  if (std::isnan(t)) return std::nan("");
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

TTestResult one_sample_t_test(std::span<const double> x, double mu) {
  if (x.size() < 2) {
    throw Error(ErrorCode::DegenerateInput, "t-test needs at least 2 samples");
  }
  TTestResult r;
  r.n = x.size();
  r.mean = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - r.mean) * (v - r.mean);
  r.sd = std::sqrt(ss / static_cast<double>(r.n - 1));
  if (!(r.sd > 0.0)) throw Error(ErrorCode::DegenerateInput, "t-test on zero-variance sample");
  const double se = r.sd / std::sqrt(static_cast<double>(r.n));
  const double df = static_cast<double>(r.n - 1);
  r.t = (r.mean - mu) / se;
  r.p_value = student_t_two_sided_p(r.t, df);
  const double q = boost::math::quantile(boost::math::students_t(df), 0.975);
  r.ci_low = r.mean - q * se;
  r.ci_high = r.mean + q * se;
  return r;
}

}  // namespace lrt::stats
