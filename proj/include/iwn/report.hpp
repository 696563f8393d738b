#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace iwn {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// One checked claim. `law` names the relation being checked in formula
/// form, e.g. "R_y(tau) = n0 (t - |tau|)".
struct ClaimResult {
  std::string id;
  std::string law;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string criterion;  // how measured/expected/tolerance combine
  bool pass = false;
  bool informational = false;  // reported, excluded from the overall verdict
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;  // logged to stderr, never rendered
  std::vector<std::pair<std::string, std::string>> details;
};

struct VerificationReport {
  std::string suite;
  std::string version = kToolkitVersion;
  std::string rng_id;
  std::string flags;
  std::vector<ClaimResult> entries;

  bool pass() const;
  void append(const VerificationReport& other);

  /// Human-readable text.
  void render_text(std::ostream& out) const;
  /// Machine-readable `key=value` lines, one value per line.
  void render_kv(std::ostream& out) const;
  /// `claim_id,measured,expected,tolerance,pass` rows.
  void render_csv(std::ostream& out) const;
};

/// Fixed-precision rendering shared by every report writer.
std::string format_number(double v);

}  // namespace iwn
