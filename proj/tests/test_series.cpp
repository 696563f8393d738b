#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "iwn/noise.hpp"
#include "iwn/series.hpp"

using iwn::Error;
using iwn::ErrorCode;
using iwn::make_series;

TEST(SampleSeries, TimesFollowTheGrid) {
  const auto s = make_series(1.0, 0.0, std::vector<double>{0, 1, 2});
  ASSERT_EQ(s.size(), 3);
  EXPECT_EQ(s.time_of(0), 0.0);
  EXPECT_EQ(s.time_of(1), 1.0);
  EXPECT_EQ(s.time_of(2), 2.0);
}

TEST(SampleSeries, RejectsNonPositiveStep) {
  try {
    make_series(0.0, 0.0, std::vector<double>{1});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
  EXPECT_THROW(make_series(-1.0, 0.0, std::vector<double>{1}), Error);
  EXPECT_THROW(make_series(std::numeric_limits<double>::infinity(), 0.0, std::vector<double>{1}), Error);
}

TEST(SampleSeries, RejectsNonFiniteValues) {
  EXPECT_THROW(make_series(1.0, 0.0, std::vector<double>{0, std::nan("")}), Error);
  EXPECT_THROW(make_series(1.0, 0.0, std::vector<double>{std::numeric_limits<double>::infinity()}), Error);
}

TEST(SampleSeries, SinglePoint) {
  const auto s = make_series(0.5, 10.0, std::vector<double>{3.25});
  ASSERT_EQ(s.size(), 1);
  EXPECT_EQ(s.time_of(0), 10.0);
  EXPECT_EQ(s.t_end(), 10.0);
}

TEST(SampleSeries, IndexOfTimeOfRoundTrips) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dt_dist(1e-4, 1e3);
  std::uniform_real_distribution<double> t0_dist(-1e4, 1e4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = make_series(dt_dist(rng), t0_dist(rng), Eigen::VectorXd::Zero(5000));
    for (Eigen::Index k = 0; k < s.size(); k += 7) ASSERT_EQ(s.index_of(s.time_of(k)), k);
  }
}

TEST(SampleSeries, EqualityIsBitExact) {
  const auto a = make_series(1.0, 0.0, std::vector<double>{0.1, 0.2});
  const auto b = make_series(1.0, 0.0, std::vector<double>{0.1, 0.2});
  const auto c = make_series(1.0, 0.0, std::vector<double>{0.1, std::nextafter(0.2, 1.0)});
  const auto d = make_series(2.0, 0.0, std::vector<double>{0.1, 0.2});
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
  EXPECT_FALSE(a == d);
}

TEST(NoiseSpec, Validation) {
  EXPECT_NO_THROW((iwn::NoiseSpec{1.0, iwn::Distribution::Gaussian, 0}.validate()));
  EXPECT_THROW((iwn::NoiseSpec{0.0, iwn::Distribution::Gaussian, 0}.validate()), Error);
  EXPECT_THROW((iwn::NoiseSpec{-2.0, iwn::Distribution::Uniform, 0}.validate()), Error);
  EXPECT_DOUBLE_EQ((iwn::NoiseSpec{2.0, iwn::Distribution::Gaussian, 0}.sample_variance(0.5)), 4.0);
}

TEST(NoiseSpec, DistributionTags) {
  for (auto d : {iwn::Distribution::Gaussian, iwn::Distribution::Uniform, iwn::Distribution::Rademacher})
    EXPECT_EQ(iwn::parse_distribution(iwn::to_string(d)), d);
  try {
    iwn::parse_distribution("cauchy");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
  }
}

TEST(Ensemble, ValidateRejectsMixedGrids) {
  iwn::Ensemble e;
  e.paths.push_back(make_series(1.0, 0.0, std::vector<double>{1, 2}));
  e.paths.push_back(make_series(1.0, 0.0, std::vector<double>{1, 2, 3}));
  EXPECT_THROW(e.validate(), Error);
}
