#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <numbers>
#include <string_view>

#include "iwn/series.hpp"

namespace iwn::theory {

/// Intensity N0 and observation horizon T of a switched, integrated noise.
template <typename Scalar>
struct BasicTheoryParams {
  Scalar n0 = Scalar(1);
  Scalar horizon = Scalar(1);

  void validate() const {
    if (!(n0 > Scalar(0)) || !std::isfinite(n0) || !(horizon > Scalar(0)) ||
        !std::isfinite(horizon))
      throw Error(ErrorCode::InvalidInput, "theory parameters n0 and T must be positive and finite");
  }
};

using TheoryParams = BasicTheoryParams<double>;

/// sin(x)/x with the removable singularity filled in.
template <typename Scalar>
Scalar sinc(Scalar x) {
  return x == Scalar(0) ? Scalar(1) : std::sin(x) / x;
}

/// Grid rendering of n0 * delta(tau): n0/dt at zero lag, 0 at every other
/// grid lag. Off-grid lags are rejected.
template <typename Scalar>
Scalar acf_noise(Scalar tau, Scalar n0, Scalar dt) {
  if (!(dt > Scalar(0))) throw Error(ErrorCode::InvalidInput, "dt must be positive");
  const Scalar k = tau / dt;
  const Scalar nearest = std::round(k);
  if (std::abs(k - nearest) > Scalar(1e-9) * std::max(Scalar(1), std::abs(k)))
    throw Error(ErrorCode::InvalidInput, "lag is not on the sampling grid");
  return nearest == Scalar(0) ? n0 / dt : Scalar(0);
}

/// Triangular autocorrelation of the integrated noise observed up to t:
/// n0 (t - |tau|) inside the support, 0 outside.
template <typename Scalar>
Scalar acf_price(Scalar tau, Scalar t, Scalar n0) {
  const Scalar a = std::abs(tau);
  return a <= t ? n0 * (t - a) : Scalar(0);
}

/// Fourier transform of the even triangular ACF over horizon T:
/// n0 T^2 sinc^2(omega T / 2).
template <typename Scalar>
Scalar psd_price(Scalar omega, const BasicTheoryParams<Scalar>& p) {
  const Scalar s = sinc(omega * p.horizon / Scalar(2));
  return p.n0 * p.horizon * p.horizon * s * s;
}

/// The printed closed form n0 T^2 sinc^2(omega T). Kept for side-by-side
/// plots only; its zeros do not match the transform of the triangle.
template <typename Scalar>
Scalar psd_price_literal(Scalar omega, const BasicTheoryParams<Scalar>& p) {
  const Scalar s = sinc(omega * p.horizon);
  return p.n0 * p.horizon * p.horizon * s * s;
}

template <typename Scalar>
Scalar psd_noise(Scalar /*omega*/, Scalar n0) {
  return n0;
}

template <typename Scalar>
Scalar angular_frequency(Scalar xi) {
  return Scalar(2) * std::numbers::pi_v<Scalar> * xi;
}

template <typename Scalar>
Scalar ordinary_frequency(Scalar omega) {
  return omega / (Scalar(2) * std::numbers::pi_v<Scalar>);
}

/// Share of the sinc^2 energy between its first zeros. Independent of
/// n0 and T.
double main_lobe_fraction();

/// Main-lobe edge of psd_price: first zero at |omega| = 2 pi / T.
double main_lobe_edge(const TheoryParams& p);

/// Wiener-Khinchin route: 2 * integral_0^T acf_price(tau) cos(omega tau) dtau
/// by composite Gauss-Legendre quadrature.
double psd_price_by_quadrature(double omega, const TheoryParams& p);

enum class PsdForm { Transform, PrintedLiteral };

std::string_view to_string(PsdForm v);

/// CSV `omega,value` over [-omega_max, omega_max] with a `#` header recording
/// the parameters and formula variant.
void write_psd_curve(std::ostream& out, const TheoryParams& p, PsdForm variant,
                     int points, double omega_max);

/// CSV `tau,value` over [-T, T].
void write_acf_curve(std::ostream& out, const TheoryParams& p, int points);

}  // namespace iwn::theory
