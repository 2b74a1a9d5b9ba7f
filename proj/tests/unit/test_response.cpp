#include <gtest/gtest.h>

#include <random>

#include "lrt/error.hpp"
#include "lrt/response.hpp"
#include "oracles.hpp"

using lrt::Matrix;
using lrt::Vector;

namespace {

Matrix toy_a() {
  Matrix a(2, 2);
  a << 0.0, 0.5, 0.2, 0.0;
  return a;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST(ImpulseResponse, ScalarAndAtOrigin) {
  const auto t = oracle::make_table(Matrix::Zero(1, 1), Vector::Ones(1));
  const auto c = lrt::impulse_response(t, Vector::Ones(1), {0.0, 1.0, 2.0});
  EXPECT_EQ(c.values[0](0), 1.0);
  EXPECT_NEAR(c.values[1](0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(c.values[2](0), std::exp(-2.0), 1e-15);
}

TEST(StepResponse, Examples) {
  Matrix half(1, 1);
  half << 0.5;
  const auto t1 = oracle::make_table(half, Vector::Ones(1));
  auto c = lrt::step_response(t1, Vector::Ones(1), {0.0, lrt::kInfiniteHorizon});
  EXPECT_EQ(c.values[0](0), 0.0);
  EXPECT_NEAR(c.values[1](0), 2.0, 1e-15);
  const auto t2 = oracle::make_table(toy_a(), Vector::Ones(2));
  c = lrt::step_response(t2, vec({1, 0}), {0.0, lrt::kInfiniteHorizon});
  EXPECT_NEAR(c.values[1](0), 1.0 / 0.9, 1e-14);
  EXPECT_NEAR(c.values[1](1), 0.2 / 0.9, 1e-14);
}

TEST(StepResponse, EndpointMatchesSusceptibility) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracle::random_productive(6, rng);
    const auto t = oracle::make_table(a, Vector::Ones(6));
    const Vector x = Vector::LinSpaced(6, -1.0, 2.0);
    const auto grid = lrt::uniform_grid(3.0, 0.01);
    const auto c = lrt::step_response(t, x, grid);
    const Vector ref = lrt::susceptibility_analytic(t, 3.0).values * x;
    EXPECT_LT((c.values.back() - ref).norm() / ref.norm(), 1e-12);
    const Vector oracle_ref = oracle::truncated_susceptibility(a, 3.0) * x;
    EXPECT_LT((c.values.back() - oracle_ref).norm() / oracle_ref.norm(), 1e-10);
  }
}

TEST(Response, SuperpositionAndScaling) {
  std::mt19937_64 rng(32);
  const auto t = oracle::make_table(oracle::random_productive(4, rng), Vector::Ones(4));
  const Vector x1 = Vector::LinSpaced(4, 0.0, 1.0), x2 = Vector::LinSpaced(4, 2.0, -1.0);
  const auto grid = lrt::uniform_grid(5.0, 0.5);
  const auto a = lrt::impulse_response(t, x1, grid);
  const auto b = lrt::impulse_response(t, x2, grid);
  const auto ab = lrt::impulse_response(t, x1 + x2, grid);
  const auto scaled = lrt::step_response(t, -3.0 * x1, grid);
  const auto base = lrt::step_response(t, x1, grid);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    EXPECT_LT((ab.values[g] - a.values[g] - b.values[g]).norm(), 1e-13);
    EXPECT_LT((scaled.values[g] + 3.0 * base.values[g]).norm(), 1e-13);
  }
}

TEST(Response, ImpulseAreaEqualsStationaryLimit) {
  std::mt19937_64 rng(33);
  const Matrix a = oracle::random_productive(3, rng);
  const auto t = oracle::make_table(a, Vector::Ones(3));
  const Vector x = Vector::Ones(3);
  const auto grid = lrt::uniform_grid(60.0, 0.01);
  const auto c = lrt::impulse_response(t, x, grid);
  Vector area = Vector::Zero(3);
  for (std::size_t g = 1; g < grid.size(); ++g) {
    area += 0.5 * (grid[g] - grid[g - 1]) * (c.values[g] + c.values[g - 1]);
  }
  const Vector ref = oracle::leontief_inverse(a) * x;
  EXPECT_LT((area - ref).norm() / ref.norm(), 1e-4);
}

TEST(GeneralResponse, TabulatedStepMatchesStepResponse) {
  const auto t = oracle::make_table(toy_a(), Vector::Ones(2));
  const Vector x = vec({1.0, -0.5});
  const auto grid = lrt::uniform_grid(3.0, 1e-3);
  std::vector<Vector> values(grid.size(), x);
  const auto general =
      lrt::general_response(t, lrt::ShockProfile::tabulated(grid, values), lrt::uniform_grid(3.0, 0.5));
  const auto step = lrt::step_response(t, x, lrt::uniform_grid(3.0, 0.5));
  for (std::size_t g = 1; g < step.grid.size(); ++g) {
    EXPECT_LT((general.values[g] - step.values[g]).norm() / step.values[g].norm(), 1e-6);
  }
}

TEST(GeneralResponse, ZeroAndSuperposition) {
  const auto t = oracle::make_table(toy_a(), Vector::Ones(2));
  const auto grid = lrt::uniform_grid(2.0, 0.01);
  std::vector<Vector> zero(grid.size(), Vector::Zero(2)), p1, p2, sum;
  for (double s : grid) {
    p1.push_back(vec({std::sin(s), 0.0}));
    p2.push_back(vec({0.3, std::cos(3 * s)}));
    sum.push_back(p1.back() + p2.back());
  }
  const auto out_grid = lrt::uniform_grid(2.0, 0.1);
  const auto z = lrt::general_response(t, lrt::ShockProfile::tabulated(grid, zero), out_grid);
  for (const auto& v : z.values) EXPECT_EQ(v.norm(), 0.0);
  const auto r1 = lrt::general_response(t, lrt::ShockProfile::tabulated(grid, p1), out_grid);
  const auto r2 = lrt::general_response(t, lrt::ShockProfile::tabulated(grid, p2), out_grid);
  const auto rs = lrt::general_response(t, lrt::ShockProfile::tabulated(grid, sum), out_grid);
  for (std::size_t g = 0; g < out_grid.size(); ++g) {
    EXPECT_LT((rs.values[g] - r1.values[g] - r2.values[g]).norm(), 1e-12);
  }
}

TEST(GeneralResponse, GridMismatch) {
  const auto t = oracle::make_table(toy_a(), Vector::Ones(2));
  std::vector<Vector> v(3, Vector::Ones(2));
  try {
    lrt::general_response(t, lrt::ShockProfile::tabulated({0.0, 1.0, 2.0}, v), {0.0, 0.5});
    FAIL();
  } catch (const lrt::Error& e) {
    EXPECT_EQ(e.code(), lrt::ErrorCode::GridMismatch);
  }
}

TEST(MonteCarloResponse, AgreesWithAnalyticImpulse) {
  const auto t = oracle::make_table(toy_a(), Vector::Constant(2, 100.0));
  const Matrix nu = lrt::noise_covariance(lrt::NoiseSpec::output_proportional(0.01), t);
  const Vector x = vec({1.0, 0.0});
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0};
  lrt::ResponseMonteCarloOptions o;
  o.length = 4000.0;
  const auto mc = lrt::impulse_response_monte_carlo(t, nu, x, grid, o);
  const auto exact = lrt::impulse_response(t, x, grid);
  ASSERT_TRUE(mc.standard_errors);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (Eigen::Index k = 0; k < 2; ++k) {
      const double se = (*mc.standard_errors)[g](k);
      EXPECT_LT(std::abs(mc.values[g](k) - exact.values[g](k)), 4.0 * se + 1e-12)
          << "t=" << grid[g] << " k=" << k;
    }
  }
}

TEST(RecoveryTime, Examples) {
  const auto t = oracle::make_table(Matrix::Zero(2, 2), Vector::Ones(2));
  const auto c = lrt::impulse_response(t, Vector::Ones(2), lrt::uniform_grid(5.0, 0.001));
  for (double r : lrt::recovery_time(c, std::exp(-1.0))) EXPECT_NEAR(r, 1.0, 1e-3);
  lrt::ResponseCurve zero;
  zero.grid = {0.0, 1.0};
  zero.values = {Vector::Zero(2), Vector::Zero(2)};
  zero.shock = lrt::ShockProfile::impulse(Vector::Zero(2));
  for (double r : lrt::recovery_time(zero)) EXPECT_EQ(r, 0.0);
  const auto short_curve = lrt::impulse_response(t, Vector::Ones(2), {0.0, 0.5});
  for (double r : lrt::recovery_time(short_curve)) EXPECT_EQ(r, lrt::kNeverRecovers);
}

TEST(ImpliedShock, Examples) {
  const auto t = oracle::make_table(Matrix::Zero(3, 3), Vector::Ones(3));
  const Vector y = Vector::LinSpaced(3, 1.0, 3.0);
  EXPECT_EQ(lrt::implied_shock(t, y, y).shock, Vector::Zero(3));
  const Vector dy = vec({0.1, -0.2, 0.3});
  const auto s = lrt::implied_shock(t, y, y + dy);
  EXPECT_LT((s.shock - dy / (1.0 - std::exp(-1.0))).norm(), 1e-14);
}

TEST(ImpliedShock, ForwardMapRoundTrip) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = oracle::random_productive(8, rng);
    const auto t = oracle::make_table(a, Vector::Ones(8));
    const Vector x = Vector::LinSpaced(8, -3.0, 5.0);
    const Vector y = Vector::Constant(8, 100.0);
    const Vector dy = oracle::truncated_susceptibility(a, 1.0) * x;
    const auto s = lrt::implied_shock(t, y, y + dy);
    EXPECT_LT((s.shock - x).norm() / x.norm(), 1e-8);
    EXPECT_LT(s.round_trip_error, 1e-8);
  }
}

TEST(ImpliedShock, IllConditioned) {
  const auto t = oracle::make_table(Matrix::Zero(2, 2), Vector::Ones(2));
  lrt::ImpliedShockOptions o;
  o.condition_cap = 0.5;  // below any achievable condition number
  try {
    lrt::implied_shock(t, Vector::Ones(2), Vector::Constant(2, 2.0), o);
    FAIL();
  } catch (const lrt::Error& e) {
    EXPECT_EQ(e.code(), lrt::ErrorCode::IllConditioned);
  }
  o.ridge = 1e-6;
  const auto s = lrt::implied_shock(t, Vector::Ones(2), Vector::Constant(2, 2.0), o);
  EXPECT_TRUE(s.ridge_used);
}

TEST(LrtForecast, Examples) {
  const auto t = oracle::make_table(Matrix::Zero(2, 2), Vector::Ones(2));
  const Vector y = vec({10, 20});
  auto f = lrt::lrt_forecast(t, y, y);
  EXPECT_EQ(f.two_year, y);
  const Vector dy = vec({1, -2});
  f = lrt::lrt_forecast(t, y, y + dy);
  const Vector expected = y + dy * (1 - std::exp(-2.0)) / (1 - std::exp(-1.0));
  EXPECT_LT((f.two_year - expected).norm(), 1e-12);
  EXPECT_LT((f.one_year - (y + dy)).norm(), 1e-12);
}

TEST(LrtForecast, MatchesDeterministicTrajectory) {
  std::mt19937_64 rng(35);
  const Matrix a = oracle::random_productive(4, rng);
  const auto t = oracle::make_table(a, Vector::Constant(4, 10.0));
  const Vector x = Vector::LinSpaced(4, 1.0, 4.0);
  // Exact ODE path from Y0 under a step shock: Y0 + rho(s) X.
  const Vector y0 = t.output;
  const Vector y1 = y0 + oracle::truncated_susceptibility(a, 1.0) * x;
  const Vector y2 = y0 + oracle::truncated_susceptibility(a, 2.0) * x;
  const auto f = lrt::lrt_forecast(t, y0, y1);
  EXPECT_LT((f.two_year - y2).norm() / y2.norm(), 1e-6);
}

TEST(Fluctuations, PredictionAndRegression) {
  const auto t = oracle::make_table(Matrix::Zero(3, 3), Vector::LinSpaced(3, 1.0, 3.0));
  const Vector p = lrt::fluctuation_prediction(t, 2.0);
  EXPECT_LT((p - 2.0 * t.output).norm(), 1e-14);

  const Vector pred = Vector::LinSpaced(20, 1.0, 20.0);
  Vector size(20), obs(20);
  for (int i = 0; i < 20; ++i) {
    size(i) = (i * 7) % 11;
    obs(i) = 0.5 * pred(i) + 0.01 * ((i * 3) % 5 - 2);
  }
  const auto reg = lrt::fluctuation_regression(pred, size, obs);
  EXPECT_NEAR(reg.eta, 0.5, 1e-3);
  EXPECT_GT(reg.r, 0.999);
  EXPECT_NEAR(reg.size_coefficient, 0.0, 5 * reg.size_coefficient_se + 1e-3);
  EXPECT_EQ(reg.count, 20u);
}

TEST(Fluctuations, MeanOutputChange) {
  const std::vector<Vector> series{vec({1, 5}), vec({3, 4}), vec({2, 6})};
  const Vector signed_change = lrt::mean_output_change(series);
  EXPECT_DOUBLE_EQ(signed_change(0), 0.5);
  EXPECT_DOUBLE_EQ(signed_change(1), 0.5);
  const Vector abs_change = lrt::mean_output_change(series, true);
  EXPECT_DOUBLE_EQ(abs_change(0), 1.5);
  EXPECT_DOUBLE_EQ(abs_change(1), 1.5);
}
