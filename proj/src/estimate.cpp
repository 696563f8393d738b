#include "iwn/estimate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include <unsupported/Eigen/FFT>

#include "iwn/numeric.hpp"

namespace iwn {

std::string_view to_string(AcfMode m) {
  return m == AcfMode::Ensemble ? "ensemble" : "biased-time-average";
}
std::string_view to_string(FreqKind k) { return k == FreqKind::Angular ? "angular" : "ordinary"; }
std::string_view to_string(PsdMethod m) {
  return m == PsdMethod::AveragedSegments ? "averaged-segments" : "periodogram";
}
std::string_view to_string(Taper t) { return t == Taper::Hann ? "hann" : "rectangular"; }

Taper parse_taper(std::string_view tag) {
  if (tag == "rectangular") return Taper::Rectangular;
  if (tag == "hann") return Taper::Hann;
  throw Error(ErrorCode::Config,
              "unsupported taper '" + std::string(tag) + "' (expected rectangular|hann)");
}

PsdEstimate PsdEstimate::as(FreqKind kind) const {
  if (kind == freq_kind) return *this;
  PsdEstimate out = *this;
  const double f = kind == FreqKind::Angular ? 2.0 * std::numbers::pi : 0.5 / std::numbers::pi;
  out.freqs = freqs * f;
  out.freq_kind = kind;
  return out;
}

double PsdEstimate::resolution() const {
  const Eigen::Index len = method == PsdMethod::AveragedSegments ? segment_len : n;
  return 1.0 / (static_cast<double>(len) * dt);
}

double PsdEstimate::total_power() const {
  const Eigen::Index len = method == PsdMethod::AveragedSegments ? segment_len : n;
  numeric::CompensatedSum s;
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    const bool unpaired = j == 0 || (len % 2 == 0 && j == len / 2);
    s.add((unpaired ? 1.0 : 2.0) * values[j]);
  }
  return s.value() * resolution();
}

double sample_mean(const SampleSeries& x) {
  if (x.empty()) throw Error(ErrorCode::InsufficientData, "mean of an empty series");
  numeric::CompensatedSum s;
  for (double v : x.values()) s.add(v);
  return s.value() / static_cast<double>(x.size());
}

double sample_variance(Eigen::Ref<const Eigen::VectorXd> v) {
  if (v.size() < 2) throw Error(ErrorCode::InsufficientData, "variance needs >= 2 samples");
  numeric::CompensatedSum s;
  for (double a : v) s.add(a);
  const double m = s.value() / static_cast<double>(v.size());
  numeric::CompensatedSum ss;
  for (double a : v) ss.add((a - m) * (a - m));
  return ss.value() / static_cast<double>(v.size() - 1);
}

namespace {

using Complex = std::complex<double>;

std::vector<Complex> forward_fft(const std::vector<double>& in) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.fwd(out, in);
  return out;
}

// Centered autocovariance sums sum_i c_i c_{i+k} for k = 0..max_lag.
Eigen::VectorXd lagged_products(const Eigen::VectorXd& c, Eigen::Index max_lag) {
  const Eigen::Index n = c.size();
  Eigen::VectorXd out(max_lag + 1);
  if (max_lag <= 128) {
    for (Eigen::Index k = 0; k <= max_lag; ++k)
      out[k] = c.head(n - k).dot(c.tail(n - k));
    return out;
  }
  // Zero-padded circular correlation through the FFT.
  std::size_t len = std::bit_ceil(static_cast<std::size_t>(2 * n));
  std::vector<double> buf(len, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) buf[i] = c[i];
  Eigen::FFT<double> fft;
  std::vector<Complex> spec;
  fft.fwd(spec, buf);
  for (auto& z : spec) z = Complex(std::norm(z), 0.0);
  std::vector<Complex> back;
  fft.inv(back, spec);
  for (Eigen::Index k = 0; k <= max_lag; ++k) out[k] = back[k].real();
  return out;
}

}  // namespace

AcfEstimate sample_acf(const SampleSeries& x, Eigen::Index max_lag, bool normalize) {
  const Eigen::Index n = x.size();
  if (max_lag < 0) throw Error(ErrorCode::InvalidInput, "max_lag must be >= 0");
  if (max_lag >= n)
    throw Error(ErrorCode::InsufficientData, "max_lag " + std::to_string(max_lag) +
                                                 " needs more than that many samples");
  const double m = sample_mean(x);
  const Eigen::VectorXd c = x.values().array() - m;
  Eigen::VectorXd r = lagged_products(c, max_lag) / static_cast<double>(n);
  if (normalize) {
    if (!(r[0] > 0.0))
      throw Error(ErrorCode::DegenerateInput, "normalized ACF of a zero-variance series");
    r /= r[0];
  }
  AcfEstimate est;
  est.lags.resize(max_lag + 1);
  for (Eigen::Index k = 0; k <= max_lag; ++k) est.lags[k] = k;
  est.values = std::move(r);
  est.mode = AcfMode::BiasedTimeAverage;
  est.normalized = normalize;
  est.n = n;
  est.dt = x.dt();
  return est;
}

AcfEstimate ensemble_acf(const Ensemble& e, Eigen::Index t_index, std::vector<Eigen::Index> lags) {
  if (e.size() < kMinEnsemblePaths)
    throw Error(ErrorCode::StatisticalPower,
                "ensemble ACF needs at least " + std::to_string(kMinEnsemblePaths) + " paths, got " +
                    std::to_string(e.size()));
  e.validate();
  if (lags.empty()) throw Error(ErrorCode::InvalidInput, "no lags requested");
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
  const auto& ref = e.paths.front();
  if (t_index < 0 || t_index >= ref.size())
    throw Error(ErrorCode::InvalidInput, "t_index outside the path");
  if (lags.front() < 0 || t_index - lags.back() < 0)
    throw Error(ErrorCode::InvalidInput, "lags must lie in [0, t_index]");

  const std::size_t m = lags.size();
  struct Acc {
    std::vector<numeric::CompensatedSum> sum, sum_sq;
  };
  const Acc init{std::vector<numeric::CompensatedSum>(m), std::vector<numeric::CompensatedSum>(m)};
  const Acc total = numeric::block_reduce(
      e.size(), 256, init,
      [&](Acc& acc, std::size_t p) {
        const auto& y = e.paths[p];
        for (std::size_t j = 0; j < m; ++j) {
          const double prod = y[t_index - lags[j]] * y[t_index];
          acc.sum[j].add(prod);
          acc.sum_sq[j].add(prod * prod);
        }
      },
      [m](Acc& into, const Acc& part) {
        for (std::size_t j = 0; j < m; ++j) {
          into.sum[j].merge(part.sum[j]);
          into.sum_sq[j].merge(part.sum_sq[j]);
        }
      });

  const double paths = static_cast<double>(e.size());
  AcfEstimate est;
  est.lags = lags;
  est.values.resize(static_cast<Eigen::Index>(m));
  est.standard_errors.resize(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    const double mean = total.sum[j].value() / paths;
    const double var = std::max(0.0, (total.sum_sq[j].value() - paths * mean * mean) / (paths - 1.0));
    est.values[j] = mean;
    est.standard_errors[j] = std::sqrt(var / paths);
  }
  est.mode = AcfMode::Ensemble;
  est.n = static_cast<Eigen::Index>(e.size());
  est.dt = ref.dt();
  return est;
}

PsdEstimate periodogram(const SampleSeries& x) {
  const Eigen::Index n = x.size();
  if (n < 8) throw Error(ErrorCode::InsufficientData, "periodogram needs at least 8 samples");
  std::vector<double> in(x.values().data(), x.values().data() + n);
  const auto spec = forward_fft(in);
  const Eigen::Index half = n / 2;
  PsdEstimate p;
  p.freqs.resize(half + 1);
  p.values.resize(half + 1);
  const double scale = x.dt() / static_cast<double>(n);
  for (Eigen::Index j = 0; j <= half; ++j) {
    p.freqs[j] = static_cast<double>(j) / (static_cast<double>(n) * x.dt());
    p.values[j] = std::norm(spec[j]) * scale;
  }
  p.method = PsdMethod::Periodogram;
  p.taper = Taper::Rectangular;
  p.segment_len = n;
  p.n = n;
  p.dt = x.dt();
  return p;
}

PsdEstimate averaged_psd(const SampleSeries& x, Eigen::Index segment_len,
                         double overlap_fraction, Taper taper, bool remove_mean) {
  if (segment_len < 8 || !std::has_single_bit(static_cast<std::size_t>(segment_len)))
    throw Error(ErrorCode::InvalidInput,
                "segment length must be a power of two >= 8, got " + std::to_string(segment_len));
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
    throw Error(ErrorCode::InvalidInput, "overlap fraction must lie in [0, 1)");
  if (segment_len > x.size())
    throw Error(ErrorCode::InsufficientData, "segment longer than the series");

  const Eigen::Index len = segment_len;
  const Eigen::Index step =
      std::max<Eigen::Index>(1, len - static_cast<Eigen::Index>(std::llround(overlap_fraction * len)));
  const Eigen::Index segments = 1 + (x.size() - len) / step;
  if (segments < 2) {
    PsdEstimate p = periodogram(x);
    p.fell_back = true;
    p.overlap_fraction = overlap_fraction;
    return p;
  }

  Eigen::VectorXd window(len);
  for (Eigen::Index k = 0; k < len; ++k)
    window[k] = taper == Taper::Hann
                    ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / len)
                    : 1.0;
  const double window_power = window.squaredNorm();
  const Eigen::Index half = len / 2;

  Eigen::FFT<double> fft;
  std::vector<double> buf(len);
  std::vector<Complex> spec;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(half + 1);
  for (Eigen::Index s = 0; s < segments; ++s) {
    const auto seg = x.values().segment(s * step, len);
    const double m = remove_mean ? seg.mean() : 0.0;
    for (Eigen::Index k = 0; k < len; ++k) buf[k] = (seg[k] - m) * window[k];
    fft.fwd(spec, buf);
    for (Eigen::Index j = 0; j <= half; ++j) acc[j] += std::norm(spec[j]);
  }

  PsdEstimate p;
  p.freqs.resize(half + 1);
  for (Eigen::Index j = 0; j <= half; ++j)
    p.freqs[j] = static_cast<double>(j) / (static_cast<double>(len) * x.dt());
  p.values = acc * (x.dt() / (window_power * static_cast<double>(segments)));
  p.method = PsdMethod::AveragedSegments;
  p.taper = taper;
  p.segment_len = len;
  p.overlap_fraction = overlap_fraction;
  p.segments = segments;
  p.mean_removed = remove_mean;
  p.n = x.size();
  p.dt = x.dt();
  return p;
}

std::pair<double, double> default_slope_band(Eigen::Index n, double dt) {
  return {4.0 / (static_cast<double>(n) * dt), 0.1 / dt};
}

SlopeFit fit_loglog_slope(const PsdEstimate& p, double band_lo, double band_hi) {
  if (!(band_lo < band_hi)) throw Error(ErrorCode::InvalidInput, "band needs lo < hi");
  std::vector<Eigen::Index> bins;
  std::vector<Eigen::Index> bad;
  for (Eigen::Index j = 0; j < p.freqs.size(); ++j) {
    if (p.freqs[j] > band_lo && p.freqs[j] < band_hi) {
      bins.push_back(j);
      if (!(p.values[j] > 0.0)) bad.push_back(j);
    }
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "non-positive density in band at bins";
    for (auto j : bad) msg << ' ' << j;
    throw Error(ErrorCode::DegenerateInput, msg.str());
  }
  if (bins.size() < 8)
    throw Error(ErrorCode::InsufficientData, "slope fit needs >= 8 bins inside the band, found " +
                                                 std::to_string(bins.size()));
  const auto m = static_cast<Eigen::Index>(bins.size());
  Eigen::VectorXd lx(m), ly(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    lx[i] = std::log(p.freqs[bins[i]]);
    ly[i] = std::log(p.values[bins[i]]);
  }
  const double mx = lx.mean(), my = ly.mean();
  const Eigen::VectorXd dx = lx.array() - mx;
  const Eigen::VectorXd dy = ly.array() - my;
  const double sxx = dx.squaredNorm();
  const double slope = dx.dot(dy) / sxx;
  const double intercept = my - slope * mx;
  const double ss_tot = dy.squaredNorm();
  const double ss_res = (dy - slope * dx).squaredNorm();
  SlopeFit fit;
  fit.band_lo = band_lo;
  fit.band_hi = band_hi;
  fit.slope = slope;
  fit.intercept = intercept;
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  fit.bins = m;
  return fit;
}

double dc_component(const SampleSeries& xk, const SwitchWindow& w) {
  numeric::CompensatedSum s;
  Eigen::Index count = 0;
  for (Eigen::Index k = 0; k < xk.size(); ++k) {
    if (w.contains(xk.time_of(k))) {
      s.add(xk[k]);
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::InvalidInput, "window admits no samples");
  return s.value() / static_cast<double>(count);
}

double dc_component(const SampleSeries& xk) { return sample_mean(xk); }

WhitenessResult whiteness_test(const SampleSeries& x, Eigen::Index max_lag, double alpha) {
  if (max_lag < 1) throw Error(ErrorCode::InvalidInput, "whiteness test needs max_lag >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::InvalidInput, "significance level must lie in (0, 1)");
  const Eigen::Index n = x.size();
  if (n < 5 * max_lag)
    throw Error(ErrorCode::InsufficientData, "whiteness test needs at least 5*max_lag samples");
  const AcfEstimate rho = sample_acf(x, max_lag, true);

  const double nd = static_cast<double>(n);
  const double band = numeric::normal_quantile(1.0 - alpha / 2.0) / std::sqrt(nd);
  double q = 0.0;
  Eigen::Index violations = 0;
  for (Eigen::Index k = 1; k <= max_lag; ++k) {
    const double r = rho.values[k];
    q += r * r / (nd - static_cast<double>(k));
    if (std::abs(r) > band) ++violations;
  }
  WhitenessResult res;
  res.max_lag = max_lag;
  res.n = n;
  res.alpha = alpha;
  res.q_statistic = nd * (nd + 2.0) * q;
  res.threshold = numeric::chi_square_quantile(1.0 - alpha, static_cast<double>(max_lag));
  res.band_violation_fraction = static_cast<double>(violations) / static_cast<double>(max_lag);
  res.pass = res.q_statistic <= res.threshold;
  return res;
}

}  // namespace iwn
