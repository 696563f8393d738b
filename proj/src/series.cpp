#include "iwn/series.hpp"

namespace iwn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::EmptyRequest: return "empty-request";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::ResourceLimit: return "resource-limit";
    case ErrorCode::StatisticalPower: return "statistical-power";
    case ErrorCode::Config: return "config";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::MissingColumn: return "missing-column";
    case ErrorCode::NonMonotoneTime: return "non-monotone-time";
    case ErrorCode::NonPositivePrice: return "non-positive-price";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

SampleSeries make_series(double dt, double t0, std::vector<double> values) {
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(
      values.data(), static_cast<Eigen::Index>(values.size()));
  return SampleSeries(dt, t0, std::move(v));
}

SampleSeries make_series(double dt, double t0, const Eigen::VectorXd& values) {
  return SampleSeries(dt, t0, values);
}

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::Gaussian: return "gaussian";
    case Distribution::Uniform: return "uniform";
    case Distribution::Rademacher: return "rademacher";
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view tag) {
  if (tag == "gaussian") return Distribution::Gaussian;
  if (tag == "uniform") return Distribution::Uniform;
  if (tag == "rademacher") return Distribution::Rademacher;
  throw Error(ErrorCode::Config, "unsupported distribution '" + std::string(tag) +
                                     "' (expected gaussian|uniform|rademacher)");
}

void NoiseSpec::validate() const {
  if (!(n0 > 0.0) || !std::isfinite(n0))
    throw Error(ErrorCode::InvalidInput, "noise intensity n0 must be positive and finite");
  switch (dist) {
    case Distribution::Gaussian:
    case Distribution::Uniform:
    case Distribution::Rademacher:
      return;
  }
  throw Error(ErrorCode::Config, "unsupported distribution tag");
}

void Ensemble::validate() const {
  if (paths.empty()) return;
  const auto& ref = paths.front();
  for (std::size_t i = 1; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (p.dt() != ref.dt() || p.t0() != ref.t0() || p.size() != ref.size())
      throw Error(ErrorCode::InvalidInput,
                  "ensemble path " + std::to_string(i) + " does not share the grid of path 0");
  }
}

}  // namespace iwn
