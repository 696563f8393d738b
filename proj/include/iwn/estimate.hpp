#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "iwn/price_model.hpp"
#include "iwn/series.hpp"

namespace iwn {

enum class AcfMode { BiasedTimeAverage, Ensemble };
std::string_view to_string(AcfMode m);

struct AcfEstimate {
  std::vector<Eigen::Index> lags;  // in samples, strictly increasing
  Eigen::VectorXd values;
  Eigen::VectorXd standard_errors;  // ensemble mode only, empty otherwise
  AcfMode mode = AcfMode::BiasedTimeAverage;
  bool normalized = false;
  Eigen::Index n = 0;  // samples (time average) or paths (ensemble)
  double dt = 1.0;
};

enum class FreqKind { Ordinary, Angular };
enum class PsdMethod { Periodogram, AveragedSegments };
enum class Taper { Rectangular, Hann };

std::string_view to_string(FreqKind k);
std::string_view to_string(PsdMethod m);
std::string_view to_string(Taper t);
Taper parse_taper(std::string_view tag);

/// Spectral density estimate on xi >= 0 (or omega = 2 pi xi). Values are
/// the two-sided density, i.e. the Fourier transform of the ACF, so white
/// noise of intensity n0 sits at level n0; the negative-frequency half is
/// the mirror image and is not stored.
struct PsdEstimate {
  Eigen::VectorXd freqs;
  Eigen::VectorXd values;
  FreqKind freq_kind = FreqKind::Ordinary;
  PsdMethod method = PsdMethod::Periodogram;
  Taper taper = Taper::Rectangular;
  Eigen::Index segment_len = 0;
  double overlap_fraction = 0.0;
  Eigen::Index segments = 1;
  bool fell_back = false;  // averaged request degraded to a single periodogram
  bool mean_removed = false;
  Eigen::Index n = 0;
  double dt = 1.0;

  /// Same estimate with the frequency axis expressed in the other unit.
  PsdEstimate as(FreqKind kind) const;
  /// Spacing of the ordinary-frequency grid, 1 / (L dt).
  double resolution() const;
  /// Integral over the full two-sided axis, sum_j w_j S_j dxi with the
  /// mirror-half weights (1, 2, ..., 2, 1).
  double total_power() const;
};

struct SlopeFit {
  double band_lo = 0.0;
  double band_hi = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  Eigen::Index bins = 0;
};

struct WhitenessResult {
  Eigen::Index max_lag = 0;
  Eigen::Index n = 0;
  double alpha = 0.05;
  double q_statistic = 0.0;
  double threshold = 0.0;
  double band_violation_fraction = 0.0;
  bool pass = false;
};

double sample_mean(const SampleSeries& x);
/// Unbiased (n - 1) sample variance.
double sample_variance(Eigen::Ref<const Eigen::VectorXd> v);

/// Biased estimator R(k) = (1/n) sum_i (x_i - m)(x_{i+k} - m), k = 0..max_lag.
/// Normalizing divides by R(0) and fails on zero-variance input.
AcfEstimate sample_acf(const SampleSeries& x, Eigen::Index max_lag, bool normalize);

/// Ensemble average of y(t - k) y(t) over integrated paths, with per-lag
/// standard errors. Needs at least kMinEnsemblePaths paths.
inline constexpr std::size_t kMinEnsemblePaths = 30;
AcfEstimate ensemble_acf(const Ensemble& e, Eigen::Index t_index, std::vector<Eigen::Index> lags);

/// |DFT|^2 dt / n on xi_j = j / (n dt), j = 0..n/2.
PsdEstimate periodogram(const SampleSeries& x);

/// Mean of tapered, overlapped segment periodograms (Welch). segment_len
/// must be a power of two; each segment's mean is removed when
/// `remove_mean` is set. Fewer than 2 segments degrades to periodogram()
/// with `fell_back` set.
PsdEstimate averaged_psd(const SampleSeries& x, Eigen::Index segment_len,
                         double overlap_fraction, Taper taper, bool remove_mean = true);

/// [4 / (n dt), 0.1 / dt]: drops the trend-dominated lowest bins and the
/// highest bins.
std::pair<double, double> default_slope_band(Eigen::Index n, double dt);

/// Least-squares line through (log f, log S) over bins strictly inside
/// (band_lo, band_hi), in the estimate's own frequency unit.
SlopeFit fit_loglog_slope(const PsdEstimate& p, double band_lo, double band_hi);

/// Mean of the samples the window admits.
double dc_component(const SampleSeries& xk, const SwitchWindow& w);
double dc_component(const SampleSeries& xk);

/// Ljung-Box portmanteau test on lags 1..max_lag against the chi-square
/// upper-alpha quantile with max_lag degrees of freedom.
WhitenessResult whiteness_test(const SampleSeries& x, Eigen::Index max_lag, double alpha);

}  // namespace iwn
