#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "iwn/estimate.hpp"
#include "iwn/ingest.hpp"
#include "iwn/report.hpp"
#include "iwn/series.hpp"

namespace iwn {

enum class Emit { Noise, LogPrice, Price };
Emit parse_emit(std::string_view tag);
std::string_view to_string(Emit e);

struct SimulateOptions {
  NoiseSpec spec;
  std::size_t paths = 1;
  std::size_t steps = 1000;
  double dt = 1.0;
  Emit emit = Emit::Noise;
  double s0 = 1.0;  // starting price for Emit::Price / log(s0) for Emit::LogPrice
};

/// Path `index` of a simulation: the noise itself, its integral started at
/// log(s0), or the exponential of that integral.
SampleSeries simulate_path(const SimulateOptions& opt, std::size_t index);

struct AnalyzeOptions {
  Eigen::Index max_lag = 20;
  double alpha = 0.05;
  Eigen::Index segment = 1024;
  double overlap = 0.5;
  Taper taper = Taper::Hann;
  std::optional<double> band_lo;
  std::optional<double> band_hi;
};

struct Analysis {
  Eigen::Index samples = 0;
  double dt = 1.0;
  bool irregular = false;
  N0Calibration n0;
  WhitenessResult whiteness;
  double mean_return = 0.0;
  double trend_slope = 0.0;     // endpoint average speed
  double ls_trend_slope = 0.0;  // least-squares alternative
  PsdEstimate psd;
  std::optional<SlopeFit> psd_fit;
  std::string psd_fit_error;
};

/// Log-price in, model diagnostics out: returns whiteness, n0, trend and
/// spectral slope.
Analysis analyze_logprice(const SampleSeries& y, bool irregular, const AnalyzeOptions& opt);

/// Report whose verdict is the whiteness of the returns; everything else
/// is informational.
VerificationReport analysis_report(const Analysis& a, const std::string& flags);

}  // namespace iwn
