#include "iwn/noise.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

namespace iwn {

NoiseStream::NoiseStream(const NoiseSpec& spec, double dt, std::uint64_t stream_index)
    : dist_(spec.dist), engine_(stream_seed(spec.seed, stream_index)) {
  spec.validate();
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorCode::InvalidInput, "time step must be positive and finite");
  const double var = spec.sample_variance(dt);
  switch (dist_) {
    case Distribution::Gaussian: scale_ = std::sqrt(var); break;
    case Distribution::Uniform: scale_ = std::sqrt(3.0 * var); break;
    case Distribution::Rademacher: scale_ = std::sqrt(var); break;
  }
}

double NoiseStream::unit_open() {
  // 53 random bits mapped onto (0, 1].
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NoiseStream::next() {
  switch (dist_) {
    case Distribution::Gaussian: {
      if (has_spare_) {
        has_spare_ = false;
        return spare_;
      }
      // Box-Muller, both outputs used.
      const double r = std::sqrt(-2.0 * std::log(unit_open()));
      const double phi = 2.0 * std::numbers::pi * unit_open();
      spare_ = scale_ * r * std::sin(phi);
      has_spare_ = true;
      return scale_ * r * std::cos(phi);
    }
    case Distribution::Uniform: {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;  // [0, 1)
      return scale_ * (2.0 * u - 1.0);
    }
    case Distribution::Rademacher:
      return (engine_() >> 63) ? scale_ : -scale_;
  }
  return 0.0;
}

SampleSeries generate_noise(const NoiseSpec& spec, std::size_t n, double dt,
                            std::uint64_t stream_index) {
  if (n == 0) throw Error(ErrorCode::EmptyRequest, "noise request for zero samples");
  NoiseStream stream(spec, dt, stream_index);
  Eigen::VectorXd values(static_cast<Eigen::Index>(n));
  for (auto& v : values) v = stream.next();
  return SampleSeries(dt, 0.0, std::move(values));
}

std::size_t ensemble_sample_cap() {
  if (const char* env = std::getenv("IWN_MAX_ENSEMBLE_SAMPLES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultEnsembleSampleCap;
}

Ensemble generate_ensemble(const NoiseSpec& spec, std::size_t paths, std::size_t n,
                           double dt) {
  return generate_ensemble(spec, paths, n, dt, ensemble_sample_cap());
}

Ensemble generate_ensemble(const NoiseSpec& spec, std::size_t paths, std::size_t n,
                           double dt, std::size_t sample_cap) {
  if (paths == 0) throw Error(ErrorCode::EmptyRequest, "ensemble request for zero paths");
  if (n == 0) throw Error(ErrorCode::EmptyRequest, "noise request for zero samples");
  if (n > sample_cap / paths)
    throw Error(ErrorCode::ResourceLimit,
                "ensemble of " + std::to_string(paths) + " x " + std::to_string(n) +
                    " samples exceeds the cap of " + std::to_string(sample_cap) +
                    " (set IWN_MAX_ENSEMBLE_SAMPLES to raise it)");
  Ensemble e{spec, {}};
  e.paths.reserve(paths);
  for (std::size_t i = 0; i < paths; ++i) e.paths.push_back(generate_noise(spec, n, dt, i));
  return e;
}

}  // namespace iwn
