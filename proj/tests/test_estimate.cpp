#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "iwn/estimate.hpp"
#include "iwn/noise.hpp"

using namespace iwn;
using std::numbers::pi;

namespace {

// O(n^2) oracles kept independent of the FFT code paths.
std::vector<double> naive_acf(const Eigen::VectorXd& x, Eigen::Index max_lag) {
  const double m = x.mean();
  std::vector<double> r(max_lag + 1, 0.0);
  for (Eigen::Index k = 0; k <= max_lag; ++k) {
    for (Eigen::Index i = 0; i + k < x.size(); ++i) r[k] += (x[i] - m) * (x[i + k] - m);
    r[k] /= static_cast<double>(x.size());
  }
  return r;
}

std::vector<double> naive_periodogram(const Eigen::VectorXd& x, double dt) {
  const auto n = x.size();
  std::vector<double> out(n / 2 + 1);
  for (Eigen::Index j = 0; j <= n / 2; ++j) {
    std::complex<double> s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) s += x[k] * std::polar(1.0, -2.0 * pi * j * k / n);
    out[j] = std::norm(s) * dt / static_cast<double>(n);
  }
  return out;
}

SampleSeries ar1(double phi, std::size_t n, std::uint64_t seed) {
  const auto e = generate_noise({1.0, Distribution::Gaussian, seed}, n, 1.0);
  Eigen::VectorXd v(e.size());
  v[0] = e[0];
  for (Eigen::Index k = 1; k < v.size(); ++k) v[k] = phi * v[k - 1] + e[k];
  return e.with_values(v);
}

SampleSeries integrated_noise(std::size_t n, std::uint64_t seed) {
  return integrate(generate_noise({1.0, Distribution::Gaussian, seed}, n - 1, 1.0));
}

void expect_code(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "no error raised";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(SampleMean, Examples) {
  EXPECT_EQ(sample_mean(make_series(1.0, 0.0, std::vector<double>{1, 2, 3, 4})), 2.5);
  expect_code(ErrorCode::InsufficientData, [] { sample_mean(make_series(1.0, 0.0, Eigen::VectorXd(0))); });
}

TEST(SampleAcf, AlternatingSeries) {
  const auto acf = sample_acf(make_series(1.0, 0.0, std::vector<double>{1, -1, 1, -1}), 2, false);
  ASSERT_EQ(acf.values.size(), 3);
  EXPECT_DOUBLE_EQ(acf.values[0], 1.0);
  EXPECT_DOUBLE_EQ(acf.values[1], -0.75);
  EXPECT_DOUBLE_EQ(acf.values[2], 0.5);
}

TEST(SampleAcf, Errors) {
  const auto flat = make_series(1.0, 0.0, std::vector<double>(10, 3.0));
  expect_code(ErrorCode::DegenerateInput, [&] { sample_acf(flat, 2, true); });
  EXPECT_NO_THROW(sample_acf(flat, 2, false));
  expect_code(ErrorCode::InsufficientData, [&] { sample_acf(flat, 10, false); });
  expect_code(ErrorCode::InvalidInput, [&] { sample_acf(flat, -1, false); });
}

TEST(SampleAcf, DirectAndFftRoutesMatchOracle) {
  const auto x = generate_noise({1.0, Distribution::Uniform, 3}, 3000, 1.0);
  for (Eigen::Index lag : {20, 128, 129, 700}) {
    const auto est = sample_acf(x, lag, false);
    const auto ref = naive_acf(x.values(), lag);
    for (Eigen::Index k = 0; k <= lag; ++k) ASSERT_NEAR(est.values[k], ref[k], 1e-12) << lag << " " << k;
  }
}

TEST(SampleAcf, ScaleAndShift) {
  const auto x = generate_noise({1.0, Distribution::Gaussian, 8}, 1000, 1.0);
  const auto base = sample_acf(x, 30, false);
  const auto scaled = sample_acf(x.with_values(3.0 * x.values()), 30, false);
  const auto shifted = sample_acf(x.with_values(x.values().array() + 50.0), 30, false);
  for (Eigen::Index k = 0; k <= 30; ++k) {
    EXPECT_NEAR(scaled.values[k], 9.0 * base.values[k], 1e-12);
    EXPECT_NEAR(shifted.values[k], base.values[k], 1e-10);
  }
}

TEST(EnsembleAcf, FollowsTriangleAndDependsOnT) {
  constexpr std::size_t paths = 4000, n = 128;
  const Ensemble noise = generate_ensemble({1.0, Distribution::Gaussian, 17}, paths, n, 1.0);
  Ensemble ys{noise.spec, {}};
  for (const auto& x : noise.paths) ys.paths.push_back(integrate(x));
  for (Eigen::Index t : {64, 128}) {
    const auto est = ensemble_acf(ys, t, {32, 0, 16, 16});
    ASSERT_EQ(est.lags.size(), 3u);
    EXPECT_EQ(est.lags[0], 0);
    EXPECT_EQ(est.mode, AcfMode::Ensemble);
    for (std::size_t j = 0; j < est.lags.size(); ++j) {
      const double expect = static_cast<double>(t - est.lags[j]);
      EXPECT_NEAR(est.values[j], expect, 4.0 * est.standard_errors[j]) << t << " " << est.lags[j];
    }
  }
}

TEST(EnsembleAcf, Errors) {
  const Ensemble few = generate_ensemble({1.0, Distribution::Gaussian, 1}, 29, 10, 1.0);
  expect_code(ErrorCode::StatisticalPower, [&] { ensemble_acf(few, 5, {0}); });
  const Ensemble e = generate_ensemble({1.0, Distribution::Gaussian, 1}, 30, 10, 1.0);
  expect_code(ErrorCode::InvalidInput, [&] { ensemble_acf(e, 5, {6}); });
  expect_code(ErrorCode::InvalidInput, [&] { ensemble_acf(e, 10, {0}); });
  expect_code(ErrorCode::InvalidInput, [&] { ensemble_acf(e, 5, {}); });
}

TEST(Periodogram, CosineOnABin) {
  const double A = 2.0, dt = 0.5;
  Eigen::VectorXd x(16);
  for (int k = 0; k < 16; ++k) x[k] = A * std::cos(2.0 * pi * 3.0 * k / 16.0);
  const auto p = periodogram(make_series(dt, 0.0, x));
  const auto ref = naive_periodogram(x, dt);
  ASSERT_EQ(p.values.size(), 9);
  for (int j = 0; j <= 8; ++j) EXPECT_NEAR(p.values[j], ref[j], 1e-12) << j;
  EXPECT_NEAR(p.values[3], A * A * 16 * dt / 4.0, 1e-12);
  EXPECT_NEAR(p.freqs[3], 3.0 / (16 * dt), 1e-15);
}

TEST(Periodogram, ZerosAndShortInput) {
  const auto p = periodogram(make_series(1.0, 0.0, Eigen::VectorXd::Zero(32)));
  EXPECT_EQ(p.values.cwiseAbs().maxCoeff(), 0.0);
  expect_code(ErrorCode::InsufficientData, [] { periodogram(make_series(1.0, 0.0, Eigen::VectorXd::Ones(7))); });
}

TEST(Periodogram, ParsevalOddAndEven) {
  for (std::size_t n : {1000u, 1001u}) {
    const auto x = generate_noise({1.0, Distribution::Gaussian, 4}, n, 0.2);
    const auto p = periodogram(x);
    EXPECT_NEAR(p.total_power(), x.values().squaredNorm() / static_cast<double>(n), 1e-10) << n;
  }
}

TEST(Periodogram, ScaleEquivariant) {
  const auto x = generate_noise({1.0, Distribution::Gaussian, 6}, 256, 1.0);
  const auto p = periodogram(x);
  const auto q = periodogram(x.with_values(-4.0 * x.values()));
  for (Eigen::Index j = 0; j < p.values.size(); ++j) EXPECT_NEAR(q.values[j], 16.0 * p.values[j], 1e-9 * (1 + q.values[j]));
}

TEST(AveragedPsd, WhiteLevelIsN0) {
  for (double dt : {1.0, 0.1}) {
    const auto x = generate_noise({2.0, Distribution::Gaussian, 10}, 1 << 15, dt);
    const auto p = averaged_psd(x, 256, 0.5, Taper::Hann);
    EXPECT_GE(p.segments, 64);
    EXPECT_EQ(p.method, PsdMethod::AveragedSegments);
    const double level = p.values.segment(1, 126).mean();
    EXPECT_NEAR(level, 2.0, 0.1) << dt;
  }
}

TEST(AveragedPsd, HannSuppressesLeakage) {
  Eigen::VectorXd x(4096);
  for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = std::sin(2.0 * pi * 10.5 * k / 256.0);
  const auto s = make_series(1.0, 0.0, x);
  const auto rect = averaged_psd(s, 256, 0.5, Taper::Rectangular, false);
  const auto hann = averaged_psd(s, 256, 0.5, Taper::Hann, false);
  const double rect_db = 10.0 * std::log10(rect.values[60] / rect.values.maxCoeff());
  const double hann_db = 10.0 * std::log10(hann.values[60] / hann.values.maxCoeff());
  EXPECT_LE(hann_db, rect_db - 30.0);
}

TEST(AveragedPsd, ArgumentChecks) {
  const auto x = generate_noise({1.0, Distribution::Gaussian, 1}, 1000, 1.0);
  expect_code(ErrorCode::InvalidInput, [&] { averaged_psd(x, 100, 0.5, Taper::Hann); });
  expect_code(ErrorCode::InvalidInput, [&] { averaged_psd(x, 128, 1.0, Taper::Hann); });
  expect_code(ErrorCode::InsufficientData, [&] { averaged_psd(x, 1024, 0.5, Taper::Hann); });
  expect_code(ErrorCode::Config, [] { parse_taper("hamming"); });
}

TEST(AveragedPsd, SingleSegmentFallsBack) {
  const auto x = generate_noise({1.0, Distribution::Gaussian, 2}, 300, 1.0);
  const auto p = averaged_psd(x, 256, 0.0, Taper::Hann);
  EXPECT_TRUE(p.fell_back);
  EXPECT_EQ(p.method, PsdMethod::Periodogram);
  EXPECT_EQ(p.values, periodogram(x).values);
}

TEST(PsdEstimate, AngularRelabelsAxisOnly) {
  const auto p = periodogram(generate_noise({1.0, Distribution::Gaussian, 2}, 64, 0.5));
  const auto w = p.as(FreqKind::Angular);
  EXPECT_EQ(w.values, p.values);
  for (Eigen::Index j = 0; j < p.freqs.size(); ++j) EXPECT_NEAR(w.freqs[j], 2 * pi * p.freqs[j], 1e-12);
  const auto back = w.as(FreqKind::Ordinary);
  for (Eigen::Index j = 0; j < p.freqs.size(); ++j) EXPECT_NEAR(back.freqs[j], p.freqs[j], 1e-12);
}

TEST(SlopeFit, ExactPowerLaw) {
  PsdEstimate p;
  p.freqs = Eigen::VectorXd::LinSpaced(100, 1.0, 100.0);
  p.values = 3.0 * p.freqs.array().pow(-2.0);
  const auto fit = fit_loglog_slope(p, 0.5, 200.0);
  EXPECT_NEAR(fit.slope, -2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.bins, 100);
}

TEST(SlopeFit, Errors) {
  PsdEstimate p;
  p.freqs = Eigen::VectorXd::LinSpaced(20, 1.0, 20.0);
  p.values = Eigen::VectorXd::Ones(20);
  p.values[4] = 0.0;
  expect_code(ErrorCode::DegenerateInput, [&] { fit_loglog_slope(p, 0.0, 30.0); });
  p.values[4] = 1.0;
  expect_code(ErrorCode::InsufficientData, [&] { fit_loglog_slope(p, 1.0, 9.0); });
  expect_code(ErrorCode::InvalidInput, [&] { fit_loglog_slope(p, 9.0, 1.0); });
  // Band edges are exclusive: (1, 10) holds frequencies 2..9.
  EXPECT_EQ(fit_loglog_slope(p, 1.0, 10.0).bins, 8);
  EXPECT_EQ(fit_loglog_slope(p, 1.0, 10.5).bins, 9);
}

TEST(SlopeFit, IntegratedNoiseHasSlopeMinusTwo) {
  constexpr Eigen::Index n = 1 << 14;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = averaged_psd(integrated_noise(n, seed), 1024, 0.5, Taper::Hann);
    const auto [lo, hi] = default_slope_band(n, 1.0);
    EXPECT_NEAR(fit_loglog_slope(p, lo, hi).slope, -2.0, 0.15) << seed;
  }
}

TEST(SlopeFit, WhiteNoiseIsFlat) {
  const auto x = generate_noise({1.0, Distribution::Gaussian, 44}, 1 << 14, 1.0);
  const auto p = averaged_psd(x, 1024, 0.5, Taper::Hann);
  EXPECT_NEAR(fit_loglog_slope(p, 0.004, 0.45).slope, 0.0, 0.1);
}

TEST(SlopeFit, InvariantUnderScaling) {
  const auto y = integrated_noise(4096, 3);
  const auto a = averaged_psd(y, 512, 0.5, Taper::Hann);
  const auto b = averaged_psd(y.with_values(7.0 * y.values()), 512, 0.5, Taper::Hann);
  EXPECT_NEAR(fit_loglog_slope(a, 0.01, 0.1).slope, fit_loglog_slope(b, 0.01, 0.1).slope, 1e-10);
}

TEST(DcComponent, EqualsAverageSpeedOfIntegral) {
  const double dt = 0.5;
  const auto x = generate_noise({1.0, Distribution::Gaussian, 5}, 400, dt);
  const auto v = average_speed(integrate(x));
  for (Eigen::Index k : {1, 10, 399, 400}) {
    const SwitchWindow w{0.0, (k - 1) * dt};
    EXPECT_NEAR(dc_component(x, w), v[k - 1], 1e-12) << k;
  }
  EXPECT_NEAR(dc_component(x), sample_mean(x), 0.0);
  EXPECT_THROW(dc_component(x, SwitchWindow{1e4, 2e4}), Error);
}

TEST(DcComponent, VarianceIsN0OverT) {
  constexpr std::size_t n = 200, seeds = 4000;
  const double dt = 0.25;
  std::vector<double> dc;
  for (std::size_t s = 0; s < seeds; ++s) dc.push_back(dc_component(generate_noise({3.0, Distribution::Uniform, 9}, n, dt, s)));
  const Eigen::Map<const Eigen::VectorXd> v(dc.data(), static_cast<Eigen::Index>(dc.size()));
  EXPECT_NEAR(sample_variance(v) * (n * dt) / 3.0, 1.0, 0.08);
}

TEST(Whiteness, RejectsStrongAutoregression) {
  const auto r = whiteness_test(ar1(0.9, 2048, 1), 20, 0.05);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.q_statistic, r.threshold);
  EXPECT_NEAR(r.threshold, 31.410, 1e-3);
  EXPECT_GT(r.band_violation_fraction, 0.5);
}

TEST(Whiteness, AcceptsTypicalWhiteNoise) {
  int passes = 0;
  for (std::uint64_t s = 0; s < 100; ++s) passes += whiteness_test(generate_noise({1.0, Distribution::Gaussian, 2}, 2048, 1.0, s), 20, 0.05).pass;
  EXPECT_GE(passes, 88);
}

TEST(Whiteness, Errors) {
  expect_code(ErrorCode::DegenerateInput, [] { whiteness_test(make_series(1.0, 0.0, Eigen::VectorXd::Zero(200)), 20, 0.05); });
  expect_code(ErrorCode::InsufficientData, [] { whiteness_test(make_series(1.0, 0.0, Eigen::VectorXd::Ones(99)), 20, 0.05); });
  expect_code(ErrorCode::InvalidInput, [] { whiteness_test(make_series(1.0, 0.0, Eigen::VectorXd::Ones(200)), 20, 1.5); });
}
