#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "iwn/estimate.hpp"
#include "iwn/series.hpp"

namespace iwn {

// Series files: UTF-8 CSV, header `t,value`, optional leading `#` comment
// lines. A `# dt=<step>` comment lets single-row files carry their step.

void write_series(std::ostream& out, const SampleSeries& s,
                  const std::vector<std::string>& comments = {});
SampleSeries read_series(std::istream& in);
SampleSeries read_series(const std::filesystem::path& path);

/// `lag,value` (plus `stderr` for ensemble estimates) under a `# meta:` block.
void write_acf(std::ostream& out, const AcfEstimate& est);
/// `freq,value` under a `# meta:` block; frequencies in the estimate's unit.
void write_psd(std::ostream& out, const PsdEstimate& est);

struct ColumnConfig {
  std::string time_col = "t";
  std::string price_col = "value";
  bool log_values = false;  // price column already holds log-prices
};

enum class TimeKind { Index, Date };

struct PriceRow {
  double time;  // index units, or days since 1970-01-01 for dates
  double price;
  std::size_t line;  // 1-based line in the source file
};

struct PriceTable {
  std::string time_col;
  std::string price_col;
  TimeKind time_kind = TimeKind::Index;
  std::vector<PriceRow> rows;
  bool log_values = false;
  double dt = 1.0;         // median spacing
  bool irregular = false;  // some spacing differs from dt
};

/// Parses and validates a price CSV. Rows with price <= 0, unparseable
/// numbers, missing columns and non-increasing timestamps each raise their
/// own error code naming the offending line.
PriceTable load_prices(std::istream& in, const ColumnConfig& cols = {});
PriceTable load_prices(const std::filesystem::path& path, const ColumnConfig& cols = {});

/// Days since 1970-01-01 for `YYYY-MM-DD` with an optional `THH:MM[:SS]`
/// or ` HH:MM[:SS]` suffix. Returns false if the text is not such a date.
bool parse_iso_date(const std::string& text, double& days);

/// y = ln s (or the stored log-prices) on a uniform grid of step table.dt
/// starting at t = 0.
SampleSeries price_to_logprice(const PriceTable& table);

struct N0Calibration {
  double n0 = 0.0;
  bool degenerate = false;  // first differences have no spread
};

/// Sample variance of first differences divided by dt (inverse of
/// Var(dy) = n0 dt).
N0Calibration calibrate_n0(const SampleSeries& y);
inline constexpr Eigen::Index kMinCalibrationSamples = 30;

}  // namespace iwn
