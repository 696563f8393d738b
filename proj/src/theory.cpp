#include "iwn/theory.hpp"

#include <cstdio>
#include <ostream>

#include "iwn/numeric.hpp"

namespace iwn::theory {

double main_lobe_fraction() {
  // integral_{-pi}^{pi} sinc^2 = 2 (Si(2 pi) - sin^2(pi)/pi) = 2 Si(2 pi);
  // the whole-line integral is pi.
  return 2.0 * numeric::sine_integral(2.0 * std::numbers::pi) / std::numbers::pi;
}

double main_lobe_edge(const TheoryParams& p) {
  p.validate();
  return 2.0 * std::numbers::pi / p.horizon;
}

double psd_price_by_quadrature(double omega, const TheoryParams& p) {
  p.validate();
  const double cycles = std::abs(omega) * p.horizon / (2.0 * std::numbers::pi);
  const int panels = 16 + 8 * static_cast<int>(std::ceil(cycles));
  auto integrand = [&](double tau) {
    return acf_price(tau, p.horizon, p.n0) * std::cos(omega * tau);
  };
  return 2.0 * numeric::integrate(integrand, 0.0, p.horizon, panels, 20);
}

std::string_view to_string(PsdForm v) {
  return v == PsdForm::Transform ? "transform:n0*T^2*sinc^2(omega*T/2)"
                                     : "printed-literal:n0*T^2*sinc^2(omega*T) (non-normative)";
}

namespace {
void put(std::ostream& out, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a, b);
  out << buf;
}
}  // namespace

void write_psd_curve(std::ostream& out, const TheoryParams& p, PsdForm variant,
                     int points, double omega_max) {
  p.validate();
  if (points < 2) throw Error(ErrorCode::InvalidInput, "curve needs at least 2 points");
  out << "# curve: psd_price\n# n0=" << p.n0 << " T=" << p.horizon << "\n# formula="
      << to_string(variant) << "\n# omega in radians per time unit\nomega,value\n";
  for (int i = 0; i < points; ++i) {
    const double w = -omega_max + 2.0 * omega_max * i / (points - 1);
    put(out, w, variant == PsdForm::Transform ? psd_price(w, p) : psd_price_literal(w, p));
  }
}

void write_acf_curve(std::ostream& out, const TheoryParams& p, int points) {
  p.validate();
  if (points < 2) throw Error(ErrorCode::InvalidInput, "curve needs at least 2 points");
  out << "# curve: acf_price\n# n0=" << p.n0 << " T=" << p.horizon
      << "\n# formula=n0*(T-|tau|)\ntau,value\n";
  for (int i = 0; i < points; ++i) {
    const double tau = -p.horizon + 2.0 * p.horizon * i / (points - 1);
    put(out, tau, acf_price(tau, p.horizon, p.n0));
  }
}

}  // namespace iwn::theory
