#include "iwn/pipeline.hpp"

#include <bit>
#include <cmath>

#include "iwn/noise.hpp"
#include "iwn/price_model.hpp"

namespace iwn {

Emit parse_emit(std::string_view tag) {
  if (tag == "noise") return Emit::Noise;
  if (tag == "logprice") return Emit::LogPrice;
  if (tag == "price") return Emit::Price;
  throw Error(ErrorCode::Config,
              "unsupported emit kind '" + std::string(tag) + "' (expected noise|logprice|price)");
}

std::string_view to_string(Emit e) {
  switch (e) {
    case Emit::Noise: return "noise";
    case Emit::LogPrice: return "logprice";
    case Emit::Price: return "price";
  }
  return "unknown";
}

SampleSeries simulate_path(const SimulateOptions& opt, std::size_t index) {
  if (!(opt.s0 > 0.0)) throw Error(ErrorCode::InvalidInput, "starting price must be positive");
  SampleSeries x = generate_noise(opt.spec, opt.steps, opt.dt, index);
  if (opt.emit == Emit::Noise) return x;
  SampleSeries y = integrate(x, std::log(opt.s0));
  if (opt.emit == Emit::LogPrice) return y;
  return y.with_values(y.values().array().exp().matrix());
}

Analysis analyze_logprice(const SampleSeries& y, bool irregular, const AnalyzeOptions& opt) {
  Analysis a;
  a.samples = y.size();
  a.dt = y.dt();
  a.irregular = irregular;
  a.n0 = calibrate_n0(y);

  const SampleSeries r = log_returns(y, 1);
  a.whiteness = whiteness_test(r, opt.max_lag, opt.alpha);
  a.mean_return = sample_mean(r);

  const SampleSeries anchored = y.with_values(y.values().array() - y[0]);
  a.trend_slope = trend_component(anchored).slope;
  a.ls_trend_slope = least_squares_trend(anchored).slope;

  Eigen::Index segment = opt.segment;
  if (segment > y.size())
    segment = static_cast<Eigen::Index>(std::bit_floor(static_cast<std::size_t>(y.size())));
  a.psd = averaged_psd(y, segment, opt.overlap, opt.taper);
  const auto [lo, hi] = default_slope_band(y.size(), y.dt());
  try {
    a.psd_fit = fit_loglog_slope(a.psd, opt.band_lo.value_or(lo), opt.band_hi.value_or(hi));
  } catch (const Error& e) {
    a.psd_fit_error = e.what();
  }
  return a;
}

VerificationReport analysis_report(const Analysis& a, const std::string& flags) {
  VerificationReport rep;
  rep.suite = "analyze";
  rep.rng_id = "none";
  rep.flags = flags;

  ClaimResult w;
  w.id = "returns.whiteness";
  w.law = "log-returns are white: Ljung-Box Q <= chi-square upper-alpha quantile";
  w.measured = a.whiteness.q_statistic;
  w.expected = a.whiteness.threshold;
  w.tolerance = a.whiteness.alpha;
  w.criterion = "measured <= expected at significance tolerance";
  w.pass = a.whiteness.pass;
  w.details = {{"max_lag", std::to_string(a.whiteness.max_lag)},
               {"band_violation_fraction", format_number(a.whiteness.band_violation_fraction)},
               {"samples", std::to_string(a.samples)},
               {"dt", format_number(a.dt)},
               {"irregular_spacing", a.irregular ? "true" : "false"}};
  rep.entries.push_back(w);

  ClaimResult n0;
  n0.id = "returns.n0";
  n0.law = "Var(dy) = n0 dt";
  n0.measured = a.n0.n0;
  n0.criterion = "calibrated intensity";
  n0.informational = true;
  n0.details = {{"degenerate", a.n0.degenerate ? "true" : "false"},
                {"mean_return", format_number(a.mean_return)}};
  rep.entries.push_back(n0);

  ClaimResult tr;
  tr.id = "trend.slope";
  tr.law = "y(t) = v(t) t with v the average speed over [0, T]";
  tr.measured = a.trend_slope;
  tr.criterion = "endpoint average speed";
  tr.informational = true;
  tr.details = {{"least_squares_slope", format_number(a.ls_trend_slope)}};
  rep.entries.push_back(tr);

  ClaimResult ps;
  ps.id = "psd.slope";
  ps.law = "S_y ~ 1/f^2 away from zero frequency";
  ps.expected = -2.0;
  ps.criterion = "log-log slope of the averaged spectrum";
  ps.informational = true;
  ps.details = {{"method", std::string(to_string(a.psd.method))},
                {"taper", std::string(to_string(a.psd.taper))},
                {"segment_len", std::to_string(a.psd.segment_len)},
                {"segments", std::to_string(a.psd.segments)},
                {"fell_back", a.psd.fell_back ? "true" : "false"}};
  if (a.psd_fit) {
    ps.measured = a.psd_fit->slope;
    ps.details.emplace_back("band_lo", format_number(a.psd_fit->band_lo));
    ps.details.emplace_back("band_hi", format_number(a.psd_fit->band_hi));
    ps.details.emplace_back("bins", std::to_string(a.psd_fit->bins));
    ps.details.emplace_back("r_squared", format_number(a.psd_fit->r_squared));
  } else {
    ps.measured = std::nan("");
    ps.details.emplace_back("error", a.psd_fit_error);
  }
  rep.entries.push_back(ps);
  return rep;
}

}  // namespace iwn
