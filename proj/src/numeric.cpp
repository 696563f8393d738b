#include "iwn/numeric.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "iwn/series.hpp"

namespace iwn::numeric {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorCode::InvalidInput, "quadrature order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double z_prev = z;
      z = z_prev - p0 / dp;
      if (std::abs(z - z_prev) <= 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 int order) {
  if (panels < 1) throw Error(ErrorCode::InvalidInput, "quadrature needs >= 1 panel");
  const GaussRule rule = gauss_legendre(order);
  const double h = (b - a) / panels;
  CompensatedSum total;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double panel = 0.0;
    for (int i = 0; i < order; ++i) panel += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total.add(0.5 * h * panel);
  }
  return total.value();
}

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

double gamma_series(double a, double x) {
  double ap = a, del = 1.0 / a, sum = del;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0))
    throw Error(ErrorCode::InvalidInput, "incomplete gamma needs a > 0, x >= 0");
}

// Root of a monotone increasing g on [lo, hi] by bisection to full precision.
template <typename G>
double bisect(G g, double lo, double hi) {
  for (int i = 0; i < 2000 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double chi_square_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidInput, "quantile needs p in (0, 1)");
  if (!(dof > 0.0)) throw Error(ErrorCode::InvalidInput, "chi-square needs dof > 0");
  double hi = std::max(1.0, dof);
  while (chi_square_cdf(hi, dof) < p) hi *= 2.0;
  if (p <= 0.5)
    return bisect([&](double x) { return chi_square_cdf(x, dof) - p; }, 0.0, hi);
  // Upper tail solved on Q to keep precision for p near 1.
  const double q = 1.0 - p;
  return bisect([&](double x) { return q - regularized_gamma_q(0.5 * dof, 0.5 * x); }, 0.0,
                hi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidInput, "quantile needs p in (0, 1)");
  if (p > 0.5) return -normal_quantile(1.0 - p);
  // Lower half: solve erfc form directly, which stays accurate in the tail.
  double lo = -40.0, hi = 0.0;
  return bisect([&](double z) { return normal_cdf(z) - p; }, lo, hi);
}

double sine_integral(double x) {
  if (x < 0.0) return -sine_integral(-x);
  if (x == 0.0) return 0.0;
  if (x <= 4.0) {
    double term = x, sum = x;
    for (int k = 1; k < 200; ++k) {
      term *= -x * x / ((2.0 * k) * (2.0 * k + 1.0));
      const double add = term / (2.0 * k + 1.0);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  // Lentz continued fraction for exp(i x) E1(i x); Si(x) = pi/2 + Im(E1(i x)).
  using cd = std::complex<double>;
  constexpr double tiny = 1e-300;
  cd b(1.0, x), c(1.0 / tiny, 0.0), d = 1.0 / b, h = d;
  for (int i = 1; i < 100000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cd del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
  }
  h *= cd(std::cos(x), -std::sin(x));
  return std::numbers::pi / 2 + h.imag();
}

std::size_t worker_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

}  // namespace iwn::numeric
