#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "iwn/report.hpp"

namespace iwn::verify {

struct Options {
  std::uint64_t seed = 42;
  std::string flags;  // recorded verbatim in the report
};

using SuiteFn = VerificationReport (*)(const Options&);

struct Suite {
  std::string_view name;
  std::string_view title;
  SuiteFn run;
};

// Each suite checks one law of the integrated-noise model at pinned sizes
// and tolerances.

/// Ensemble products y(t - tau) y(t) against n0 (t - tau): 10^4 gaussian
/// paths, t = 512, lags {0, 64, 128, 256, 448}, 3 standard errors.
VerificationReport ensemble_acf_law(const Options& opt);
/// Var(y(t)) / t in [0.95, 1.05] at t = 100, 1000, 10000; 10^4 paths per
/// distribution.
VerificationReport variance_growth(const Options& opt);
/// Averaged Hann PSD of integrated noise (n = 2^14, segment 1024, 50%
/// overlap, 32 paths): log-log slope -2 +- 0.15.
VerificationReport spectral_exponent(const Options& opt);
/// psd_price(0) == n0 T^2 exactly; quadrature at omega = 0 within 1e-9.
VerificationReport zero_frequency(const Options& opt);
/// Quadrature transform of the triangular ACF vs closed form, 200 points
/// over |omega| <= 8 pi / T, 1e-6 relative.
VerificationReport wiener_khinchin(const Options& opt);
/// Main-lobe energy share in (0.90, 0.91), matching quadrature within 1e-3.
VerificationReport main_lobe(const Options& opt);
/// Ljung-Box (K = 20, alpha = 0.05) pass rate 95% +- 2% on 1000 white
/// series; AR(0.9) rejected in >= 99%.
VerificationReport whiteness_calibration(const Options& opt);
/// y_k == v_k t_k to <= 4 ulp for every k >= 1 on 100 paths.
VerificationReport displacement_identity(const Options& opt);
/// simulate -> CSV -> analyze: n0 within 2%, white returns, slope in
/// [-2.3, -1.7], byte-identical repeated reports.
VerificationReport round_trip(const Options& opt);
/// Var(v(100)) / Var(v(1000)) = 10 +- 15% over 10^4 paths.
VerificationReport speed_stabilization(const Options& opt);

std::span<const Suite> suites();

/// Runs one suite by name, or every suite for "all".
VerificationReport run_suite(std::string_view name, const Options& opt);

/// Distance between two doubles in units in the last place.
std::uint64_t ulp_distance(double a, double b);

}  // namespace iwn::verify
