#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace iwn {

/// Failure categories surfaced by the toolkit. The CLI maps every one of
/// these to exit status 2.
enum class ErrorCode {
  InvalidInput,       // non-positive dt, non-finite value, bad window, ...
  EmptyRequest,       // zero-length generation request
  InsufficientData,   // series too short for the requested lag/span
  DegenerateInput,    // zero variance where a normalization is needed
  ResourceLimit,      // ensemble larger than the configured cap
  StatisticalPower,   // too few paths for an ensemble estimate
  Config,             // unknown distribution/taper tag, bad flag value
  Parse,              // malformed CSV content or number
  MissingColumn,      // declared CSV column absent from the header
  NonMonotoneTime,    // timestamps not strictly increasing
  NonPositivePrice,   // price <= 0, logarithm undefined
  Io,                 // unreadable / unwritable file
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Uniformly sampled real signal. Sample k sits at time t0 + k*dt.
///
/// Immutable after construction; every transformation returns a new series.
template <typename Scalar>
class BasicSampleSeries {
 public:
  using scalar_type = Scalar;
  using vector_type = Vector<Scalar>;

  BasicSampleSeries(Scalar dt, Scalar t0, vector_type values)
      : dt_(dt), t0_(t0), values_(std::move(values)) {
    if (!(dt_ > Scalar(0)) || !std::isfinite(dt_))
      throw Error(ErrorCode::InvalidInput, "time step must be positive and finite");
    if (!std::isfinite(t0_))
      throw Error(ErrorCode::InvalidInput, "start time must be finite");
    for (Eigen::Index k = 0; k < values_.size(); ++k) {
      if (!std::isfinite(values_[k]))
        throw Error(ErrorCode::InvalidInput,
                    "non-finite value at index " + std::to_string(k));
    }
  }

  Scalar dt() const noexcept { return dt_; }
  Scalar t0() const noexcept { return t0_; }
  Eigen::Index size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.size() == 0; }
  const vector_type& values() const noexcept { return values_; }
  Scalar operator[](Eigen::Index k) const { return values_[k]; }

  Scalar time_of(Eigen::Index k) const noexcept {
    return t0_ + static_cast<Scalar>(k) * dt_;
  }
  /// Nearest grid index for time t (may lie outside [0, size)).
  Eigen::Index index_of(Scalar t) const noexcept {
    return static_cast<Eigen::Index>(std::llround((t - t0_) / dt_));
  }
  Scalar t_end() const noexcept { return time_of(size() - 1); }

  /// Same grid, new values.
  BasicSampleSeries with_values(vector_type values) const {
    return BasicSampleSeries(dt_, t0_, std::move(values));
  }

  friend bool operator==(const BasicSampleSeries& a, const BasicSampleSeries& b) {
    return a.dt_ == b.dt_ && a.t0_ == b.t0_ && a.values_.size() == b.values_.size() &&
           (a.values_.array() == b.values_.array()).all();
  }

 private:
  Scalar dt_;
  Scalar t0_;
  vector_type values_;
};

using SampleSeries = BasicSampleSeries<double>;

SampleSeries make_series(double dt, double t0, std::vector<double> values);
SampleSeries make_series(double dt, double t0, const Eigen::VectorXd& values);

enum class Distribution { Gaussian, Uniform, Rademacher };

std::string_view to_string(Distribution d);
Distribution parse_distribution(std::string_view tag);

/// Reproducible white-noise source: R_x(tau) = n0 * delta(tau).
struct NoiseSpec {
  double n0 = 1.0;
  Distribution dist = Distribution::Gaussian;
  std::uint64_t seed = 0;

  void validate() const;
  /// Per-sample variance when rendered on a grid of step dt.
  double sample_variance(double dt) const { return n0 / dt; }
};

/// Independent sample functions sharing one grid; path i derives from
/// (spec.seed, i) alone.
struct Ensemble {
  NoiseSpec spec;
  std::vector<SampleSeries> paths;

  std::size_t size() const noexcept { return paths.size(); }
  /// Throws unless all paths share dt, t0 and length.
  void validate() const;
};

}  // namespace iwn
