#pragma once

#include <span>

namespace lrt::stats {

/// Sample Pearson correlation, clamped to [-1, 1]. Throws DegenerateInput
/// for a constant sequence and InvalidArgument for mismatched or short
/// (< 3) inputs.
double pearson_r(std::span<const double> x, std::span<const double> y);

struct TTestResult {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double t = 0.0;
  double p_value = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// One-sample two-sided Student t test of mean == mu, with a 95% interval
/// for the mean. Throws DegenerateInput for n < 2 or zero variance.
TTestResult one_sample_t_test(std::span<const double> x, double mu = 0.0);

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

double mean(std::span<const double> x);

}  // namespace lrt::stats
