#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "iwn/series.hpp"

namespace iwn {

/// Rectangular switch K(t): closed on [t_open, t_close], open elsewhere.
template <typename Scalar>
struct BasicSwitchWindow {
  Scalar t_open = Scalar(0);
  Scalar t_close = Scalar(1);

  bool contains(Scalar t) const noexcept { return t_open <= t && t <= t_close; }
};

using SwitchWindow = BasicSwitchWindow<double>;

/// x_k(t) = K(t) x(t) on the same grid.
template <typename Scalar>
BasicSampleSeries<Scalar> apply_switch(const BasicSampleSeries<Scalar>& x,
                                       const BasicSwitchWindow<Scalar>& w) {
  if (!(w.t_close > w.t_open))
    throw Error(ErrorCode::InvalidInput, "switch window needs t_close > t_open");
  Vector<Scalar> out(x.size());
  Eigen::Index inside = 0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (w.contains(x.time_of(k))) {
      out[k] = x[k];
      ++inside;
    } else {
      out[k] = Scalar(0);
    }
  }
  if (inside == 0)
    throw Error(ErrorCode::InvalidInput, "switch window does not overlap any sample");
  return x.with_values(std::move(out));
}

/// Left-endpoint Riemann sum of x: y_0 = y0, y_{k+1} = y_k + x_k dt.
/// Output has one more sample than the input.
template <typename Scalar>
BasicSampleSeries<Scalar> integrate(const BasicSampleSeries<Scalar>& x, Scalar y0 = Scalar(0)) {
  if (x.empty()) throw Error(ErrorCode::InsufficientData, "cannot integrate an empty series");
  Vector<Scalar> y(x.size() + 1);
  y[0] = y0;
  for (Eigen::Index k = 0; k < x.size(); ++k) y[k + 1] = y[k] + x[k] * x.dt();
  return BasicSampleSeries<Scalar>(x.dt(), x.t0(), std::move(y));
}

/// r_k = y_{k+span} - y_k; span = 1 inverts integrate up to the dt factor.
template <typename Scalar>
BasicSampleSeries<Scalar> log_returns(const BasicSampleSeries<Scalar>& y, Eigen::Index span = 1) {
  if (span < 1) throw Error(ErrorCode::InvalidInput, "return span must be >= 1");
  if (y.size() <= span)
    throw Error(ErrorCode::InsufficientData,
                "need more than " + std::to_string(span) + " samples for span-" +
                    std::to_string(span) + " returns");
  const Eigen::Index m = y.size() - span;
  Vector<Scalar> r = y.values().tail(m) - y.values().head(m);
  return BasicSampleSeries<Scalar>(y.dt(), y.t0(), std::move(r));
}

/// v_k = y_k / t_k for k >= 1. Requires the path to start at the origin
/// (t0 = 0, y_0 = 0); the origin itself is dropped.
template <typename Scalar>
BasicSampleSeries<Scalar> average_speed(const BasicSampleSeries<Scalar>& y) {
  if (y.t0() != Scalar(0) || y.empty() || y[0] != Scalar(0))
    throw Error(ErrorCode::InvalidInput, "average speed needs a path anchored at t=0, y=0");
  if (y.size() < 2)
    throw Error(ErrorCode::InsufficientData, "average speed needs at least one step");
  const Eigen::Index m = y.size() - 1;
  Vector<Scalar> v(m);
  for (Eigen::Index k = 1; k <= m; ++k) v[k - 1] = y[k] / y.time_of(k);
  return BasicSampleSeries<Scalar>(y.dt(), y.dt(), std::move(v));
}

template <typename Scalar>
struct BasicTrend {
  Scalar slope;
  Scalar intercept;
  BasicSampleSeries<Scalar> residual;
};

using Trend = BasicTrend<double>;

/// Endpoint-anchored trend line: slope is the terminal average speed
/// (y_N - y_0) / (t_N - t_0). Residual vanishes at both endpoints.
template <typename Scalar>
BasicTrend<Scalar> trend_component(const BasicSampleSeries<Scalar>& y) {
  if (y.size() < 2) throw Error(ErrorCode::InsufficientData, "trend needs at least 2 samples");
  const Eigen::Index last = y.size() - 1;
  const Scalar span = y.time_of(last) - y.t0();
  const Scalar slope = (y[last] - y[0]) / span;
  Vector<Scalar> res(y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k)
    res[k] = y[k] - y[0] - slope * (y.time_of(k) - y.t0());
  res[0] = Scalar(0);
  res[last] = Scalar(0);
  return {slope, y[0], y.with_values(std::move(res))};
}

/// Ordinary least-squares line through (t_k, y_k). Intercept is at t = t0.
template <typename Scalar>
BasicTrend<Scalar> least_squares_trend(const BasicSampleSeries<Scalar>& y) {
  if (y.size() < 2) throw Error(ErrorCode::InsufficientData, "trend needs at least 2 samples");
  const Eigen::Index n = y.size();
  // Centered index regression; exact for the uniform grid.
  const Scalar kbar = Scalar(n - 1) / Scalar(2);
  const Scalar ybar = y.values().mean();
  Scalar sxy = 0, sxx = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Scalar dk = Scalar(k) - kbar;
    sxy += dk * (y[k] - ybar);
    sxx += dk * dk;
  }
  const Scalar per_index = sxy / sxx;
  const Scalar intercept = ybar - per_index * kbar;
  Vector<Scalar> res(n);
  for (Eigen::Index k = 0; k < n; ++k) res[k] = y[k] - (intercept + per_index * Scalar(k));
  return {per_index / y.dt(), intercept, y.with_values(std::move(res))};
}

}  // namespace iwn
