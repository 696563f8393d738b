#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "iwn/noise.hpp"
#include "iwn/price_model.hpp"

using namespace iwn;

namespace {

SampleSeries ones(Eigen::Index n, double dt = 1.0) {
  return make_series(dt, 0.0, Eigen::VectorXd::Ones(n));
}

double ensemble_variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST(ApplySwitch, WindowCoveringEverythingIsIdentity) {
  const auto x = generate_noise({1.0, Distribution::Gaussian, 1}, 50, 0.1);
  EXPECT_EQ(apply_switch(x, SwitchWindow{-1.0, 100.0}), x);
}

TEST(ApplySwitch, HalfWindowZeroesTheTail) {
  const auto xk = apply_switch(ones(10), SwitchWindow{0.0, 4.5});
  for (Eigen::Index k = 0; k < 5; ++k) EXPECT_EQ(xk[k], 1.0);
  for (Eigen::Index k = 5; k < 10; ++k) EXPECT_EQ(xk[k], 0.0);
}

TEST(ApplySwitch, Errors) {
  EXPECT_THROW(apply_switch(ones(10), SwitchWindow{20.0, 30.0}), Error);
  EXPECT_THROW(apply_switch(ones(10), SwitchWindow{3.0, 3.0}), Error);
  EXPECT_THROW(apply_switch(ones(10), SwitchWindow{4.0, 2.0}), Error);
}

TEST(ApplySwitch, Idempotent) {
  const auto x = generate_noise({1.0, Distribution::Uniform, 4}, 200, 0.5);
  const SwitchWindow w{12.25, 61.0};
  const auto once = apply_switch(x, w);
  EXPECT_EQ(apply_switch(once, w), once);
}

TEST(Integrate, Examples) {
  const auto y = integrate(ones(3));
  ASSERT_EQ(y.size(), 4);
  EXPECT_EQ(y[0], 0.0);
  EXPECT_EQ(y[1], 1.0);
  EXPECT_EQ(y[2], 2.0);
  EXPECT_EQ(y[3], 3.0);

  const auto flat = integrate(make_series(0.5, 0.0, Eigen::VectorXd::Zero(6)), 2.5);
  for (double v : flat.values()) EXPECT_EQ(v, 2.5);

  EXPECT_THROW(integrate(make_series(1.0, 0.0, Eigen::VectorXd(0))), Error);
}

// Changing x_j moves every later y_k by delta*dt and leaves earlier ones alone.
TEST(Integrate, PerturbationPropagatesForward) {
  const double dt = 0.25;
  const auto x = generate_noise({1.0, Distribution::Gaussian, 9}, 100, dt);
  const auto y = integrate(x);
  for (Eigen::Index j : {0, 17, 99}) {
    Eigen::VectorXd bumped = x.values();
    bumped[j] += 3.0;
    const auto yb = integrate(x.with_values(bumped));
    for (Eigen::Index k = 0; k <= j; ++k) ASSERT_EQ(yb[k], y[k]);
    for (Eigen::Index k = j + 1; k < y.size(); ++k) ASSERT_NEAR(yb[k] - y[k], 3.0 * dt, 1e-12);
  }
}

TEST(LogReturns, Examples) {
  const auto r = log_returns(make_series(1.0, 0.0, std::vector<double>{0, 1, 3, 6}));
  ASSERT_EQ(r.size(), 3);
  EXPECT_EQ(r[0], 1.0);
  EXPECT_EQ(r[1], 2.0);
  EXPECT_EQ(r[2], 3.0);

  const auto r2 = log_returns(make_series(1.0, 0.0, std::vector<double>{0, 1, 3, 6}), 2);
  ASSERT_EQ(r2.size(), 2);
  EXPECT_EQ(r2[0], 3.0);
  EXPECT_EQ(r2[1], 5.0);

  try {
    log_returns(make_series(1.0, 0.0, std::vector<double>{5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
  EXPECT_THROW(log_returns(ones(4), 0), Error);
}

TEST(LogReturns, InvertsIntegration) {
  const double dt = 0.01;
  const auto x = generate_noise({2.0, Distribution::Gaussian, 3}, 500, dt);
  const auto r = log_returns(integrate(x));
  ASSERT_EQ(r.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) EXPECT_NEAR(r[k], x[k] * dt, 1e-12 * (1.0 + std::abs(x[k])));
}

TEST(AverageSpeed, Example) {
  const auto v = average_speed(make_series(1.0, 0.0, std::vector<double>{0, 2, 4, 6}));
  ASSERT_EQ(v.size(), 3);
  for (double s : v.values()) EXPECT_EQ(s, 2.0);
  EXPECT_EQ(v.t0(), 1.0);
}

TEST(AverageSpeed, RequiresAnchoredPath) {
  EXPECT_THROW(average_speed(make_series(1.0, 0.0, std::vector<double>{1, 2})), Error);
  EXPECT_THROW(average_speed(make_series(1.0, 1.0, std::vector<double>{0, 2})), Error);
  EXPECT_THROW(average_speed(make_series(1.0, 0.0, std::vector<double>{0})), Error);
}

TEST(AverageSpeed, RecoversDisplacementWithinFourUlp) {
  const auto y = integrate(generate_noise({1.0, Distribution::Gaussian, 21}, 1000, 0.5));
  const auto v = average_speed(y);
  for (Eigen::Index k = 1; k < y.size(); ++k) {
    const double back = v[k - 1] * y.time_of(k);
    const double scale = std::max(std::abs(y[k]), std::numeric_limits<double>::min());
    ASSERT_LE(std::abs(back - y[k]), 4.0 * std::numeric_limits<double>::epsilon() * scale) << k;
  }
}

TEST(Trend, EndpointTrendOfALine) {
  std::vector<double> line;
  for (int k = 0; k <= 10; ++k) line.push_back(1.0 + 0.5 * k * 0.2);
  const auto tr = trend_component(make_series(0.2, 0.0, line));
  EXPECT_NEAR(tr.slope, 0.5, 1e-14);
  EXPECT_EQ(tr.intercept, 1.0);
  for (double r : tr.residual.values()) EXPECT_NEAR(r, 0.0, 1e-14);
}

TEST(Trend, ResidualVanishesAtEndpoints) {
  const auto y = integrate(generate_noise({1.0, Distribution::Gaussian, 2}, 300, 1.0));
  const auto tr = trend_component(y);
  EXPECT_EQ(tr.residual[0], 0.0);
  EXPECT_EQ(tr.residual[y.size() - 1], 0.0);
  EXPECT_DOUBLE_EQ(tr.slope, y[y.size() - 1] / y.time_of(y.size() - 1));
}

TEST(Trend, LeastSquaresMatchesClosedForm) {
  const auto y = make_series(2.0, 0.0, std::vector<double>{0, 1, 4, 9});
  // Independent closed form in time units.
  double tb = 0, yb = 0;
  for (Eigen::Index k = 0; k < 4; ++k) tb += y.time_of(k), yb += y[k];
  tb /= 4, yb /= 4;
  double sxy = 0, sxx = 0;
  for (Eigen::Index k = 0; k < 4; ++k) {
    sxy += (y.time_of(k) - tb) * (y[k] - yb);
    sxx += (y.time_of(k) - tb) * (y.time_of(k) - tb);
  }
  const auto tr = least_squares_trend(y);
  EXPECT_NEAR(tr.slope, sxy / sxx, 1e-14);
  EXPECT_NEAR(tr.intercept, yb - (sxy / sxx) * tb, 1e-14);
  EXPECT_THROW(trend_component(make_series(1.0, 0.0, std::vector<double>{1})), Error);
}

TEST(EnsembleLaws, VarianceGrowsLinearly) {
  constexpr std::size_t paths = 10000, n = 400;
  const Ensemble e = generate_ensemble({1.0, Distribution::Gaussian, 31}, paths, n, 1.0);
  for (Eigen::Index t : {100, 400}) {
    std::vector<double> ys;
    for (const auto& x : e.paths) ys.push_back(integrate(x)[t]);
    EXPECT_NEAR(ensemble_variance(ys) / static_cast<double>(t), 1.0, 0.05) << t;
  }
}

TEST(EnsembleLaws, SpeedVarianceDecaysAsOneOverT) {
  constexpr std::size_t paths = 10000, n = 1000;
  const Ensemble e = generate_ensemble({1.0, Distribution::Uniform, 12}, paths, n, 1.0);
  std::vector<double> v100, v1000;
  for (const auto& x : e.paths) {
    const auto v = average_speed(integrate(x));
    v100.push_back(v[99]);
    v1000.push_back(v[999]);
  }
  EXPECT_NEAR(ensemble_variance(v100) * 100.0, 1.0, 0.05);
  EXPECT_NEAR(ensemble_variance(v1000) * 1000.0, 1.0, 0.05);
}
