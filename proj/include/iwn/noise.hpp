#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

#include "iwn/series.hpp"

namespace iwn {

/// Identifier of the pinned generator scheme; embedded in every report.
inline constexpr std::string_view kRngId = "mt19937_64/splitmix64-stream/v1";

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` under master `seed`. Counter based, so any stream
/// can be produced without touching the others.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(~index));
}

/// Draws innovations of one distribution from one stream. Transforms are
/// written out here (not std:: distributions) so the output is bit-identical
/// across standard library implementations.
class NoiseStream {
 public:
  NoiseStream(const NoiseSpec& spec, double dt, std::uint64_t stream_index);

  double next();

 private:
  double unit_open();  // (0, 1]

  Distribution dist_;
  double scale_;  // std for gaussian, half-width for uniform, magnitude for rademacher
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// n i.i.d. zero-mean samples with variance n0/dt, drawn from stream
/// `stream_index` of spec.seed. Grid starts at t0 = 0.
SampleSeries generate_noise(const NoiseSpec& spec, std::size_t n, double dt,
                            std::uint64_t stream_index = 0);

/// Cap on paths*n for generate_ensemble. The IWN_MAX_ENSEMBLE_SAMPLES
/// environment variable overrides the default.
std::size_t ensemble_sample_cap();
inline constexpr std::size_t kDefaultEnsembleSampleCap = 50'000'000;

Ensemble generate_ensemble(const NoiseSpec& spec, std::size_t paths, std::size_t n,
                           double dt);
Ensemble generate_ensemble(const NoiseSpec& spec, std::size_t paths, std::size_t n,
                           double dt, std::size_t sample_cap);

}  // namespace iwn
