#include "iwn/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "iwn/estimate.hpp"

namespace iwn {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_number(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* first = text.data();
  if (*first == '+') ++first;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

std::string at_line(std::size_t line) { return " (line " + std::to_string(line) + ")"; }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

void write_series(std::ostream& out, const SampleSeries& s,
                  const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# dt=" << fmt17(s.dt()) << "\nt,value\n";
  for (Eigen::Index k = 0; k < s.size(); ++k)
    out << fmt17(s.time_of(k)) << ',' << fmt17(s[k]) << '\n';
}

SampleSeries read_series(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  double declared_dt = 0.0;
  bool header_seen = false;
  std::vector<double> times, values;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto pos = t.find("dt=");
      if (pos != std::string::npos && !header_seen) {
        const std::string rest = trim(t.substr(pos + 3));
        const std::string num = rest.substr(0, rest.find_first_of(" \t"));
        if (!parse_number(num, declared_dt))
          throw Error(ErrorCode::Parse, "bad dt comment" + at_line(line_no));
      }
      continue;
    }
    if (!header_seen) {
      const auto cols = split_fields(t);
      if (cols.size() < 2 || cols[0] != "t" || cols[1] != "value")
        throw Error(ErrorCode::MissingColumn, "series file must start with header t,value" +
                                                  at_line(line_no));
      header_seen = true;
      continue;
    }
    const auto f = split_fields(t);
    double tv = 0.0, vv = 0.0;
    if (f.size() < 2 || !parse_number(f[0], tv) || !parse_number(f[1], vv))
      throw Error(ErrorCode::Parse, "unparseable row '" + t + "'" + at_line(line_no));
    if (!times.empty() && !(tv > times.back()))
      throw Error(ErrorCode::NonMonotoneTime, "time not strictly increasing" + at_line(line_no));
    times.push_back(tv);
    values.push_back(vv);
  }
  if (!header_seen) throw Error(ErrorCode::MissingColumn, "series file has no t,value header");
  if (values.empty()) throw Error(ErrorCode::InsufficientData, "series file has no rows");
  double dt = declared_dt;
  if (times.size() >= 2) {
    const double spacing = times[1] - times[0];
    if (dt == 0.0) dt = spacing;
    for (std::size_t k = 1; k < times.size(); ++k) {
      const double expect = times[0] + static_cast<double>(k) * dt;
      if (std::abs(times[k] - expect) > 1e-9 * std::max({1.0, std::abs(expect), dt}))
        throw Error(ErrorCode::InvalidInput,
                    "series times are not on a uniform grid at row " + std::to_string(k + 1));
    }
  }
  if (dt == 0.0) dt = 1.0;
  return make_series(dt, times.front(), std::move(values));
}

SampleSeries read_series(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_series(in);
}

void write_acf(std::ostream& out, const AcfEstimate& est) {
  const bool with_se = est.standard_errors.size() == est.values.size() && est.values.size() > 0;
  out << "# meta: estimate=acf mode=" << to_string(est.mode)
      << " normalized=" << (est.normalized ? "true" : "false") << " n=" << est.n
      << " dt=" << fmt17(est.dt) << "\n";
  out << (with_se ? "lag,value,stderr\n" : "lag,value\n");
  for (std::size_t j = 0; j < est.lags.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    out << est.lags[j] << ',' << fmt17(est.values[i]);
    if (with_se) out << ',' << fmt17(est.standard_errors[i]);
    out << '\n';
  }
}

void write_psd(std::ostream& out, const PsdEstimate& est) {
  out << "# meta: estimate=psd method=" << to_string(est.method)
      << " freq_kind=" << to_string(est.freq_kind) << " taper=" << to_string(est.taper)
      << " segment_len=" << est.segment_len << " overlap=" << fmt17(est.overlap_fraction)
      << " segments=" << est.segments << " mean_removed=" << (est.mean_removed ? "true" : "false")
      << " fell_back=" << (est.fell_back ? "true" : "false") << " n=" << est.n
      << " dt=" << fmt17(est.dt) << "\n";
  out << "# meta: values are two-sided densities (transform of the ACF); freq in "
      << (est.freq_kind == FreqKind::Angular ? "radians" : "cycles") << " per time unit\n";
  out << "freq,value\n";
  for (Eigen::Index j = 0; j < est.freqs.size(); ++j)
    out << fmt17(est.freqs[j]) << ',' << fmt17(est.values[j]) << '\n';
}

bool parse_iso_date(const std::string& text, double& days) {
  int y = 0;
  unsigned mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
  char sep = 0;
  int consumed = 0;
  if (std::sscanf(text.c_str(), "%4d-%2u-%2u%n", &y, &mo, &d, &consumed) != 3 || consumed != 10)
    return false;
  if (text.size() > 10) {
    sep = text[10];
    if (sep != 'T' && sep != ' ') return false;
    int used = 0;
    const std::string rest = text.substr(11);
    if (std::sscanf(rest.c_str(), "%2u:%2u:%2u%n", &hh, &mm, &ss, &used) == 3) {
    } else if (std::sscanf(rest.c_str(), "%2u:%2u%n", &hh, &mm, &used) == 2) {
      ss = 0;
    } else {
      return false;
    }
    const std::string tail = rest.substr(static_cast<std::size_t>(used));
    if (!(tail.empty() || tail == "Z")) return false;
    if (hh > 23 || mm > 59 || ss > 60) return false;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok()) return false;
  const auto since_epoch = sys_days{ymd}.time_since_epoch().count();
  days = static_cast<double>(since_epoch) + (hh * 3600.0 + mm * 60.0 + ss) / 86400.0;
  return true;
}

PriceTable load_prices(std::istream& in, const ColumnConfig& cols) {
  PriceTable table;
  table.time_col = cols.time_col;
  table.price_col = cols.price_col;
  table.log_values = cols.log_values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t time_idx = 0, price_idx = 0;
  bool header_seen = false;
  bool kind_known = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto f = split_fields(t);
    if (!header_seen) {
      auto find = [&](const std::string& name) {
        const auto it = std::find(f.begin(), f.end(), name);
        if (it == f.end())
          throw Error(ErrorCode::MissingColumn,
                      "column '" + name + "' not found in header" + at_line(line_no));
        return static_cast<std::size_t>(it - f.begin());
      };
      time_idx = find(cols.time_col);
      price_idx = find(cols.price_col);
      header_seen = true;
      continue;
    }
    if (f.size() <= std::max(time_idx, price_idx))
      throw Error(ErrorCode::Parse, "row has too few fields" + at_line(line_no));
    PriceRow row{0.0, 0.0, line_no};
    double tv = 0.0;
    TimeKind kind;
    if (parse_number(f[time_idx], tv)) {
      kind = TimeKind::Index;
    } else if (parse_iso_date(f[time_idx], tv)) {
      kind = TimeKind::Date;
    } else {
      throw Error(ErrorCode::Parse, "unparseable timestamp '" + f[time_idx] + "'" + at_line(line_no));
    }
    if (!kind_known) {
      table.time_kind = kind;
      kind_known = true;
    } else if (kind != table.time_kind) {
      throw Error(ErrorCode::Parse, "timestamp format changes" + at_line(line_no));
    }
    row.time = tv;
    if (!parse_number(f[price_idx], row.price))
      throw Error(ErrorCode::Parse, "unparseable price '" + f[price_idx] + "'" + at_line(line_no));
    if (!cols.log_values && !(row.price > 0.0))
      throw Error(ErrorCode::NonPositivePrice,
                  "price must be positive, got " + f[price_idx] + at_line(line_no));
    if (!table.rows.empty() && !(row.time > table.rows.back().time))
      throw Error(ErrorCode::NonMonotoneTime, "timestamp not strictly increasing" + at_line(line_no));
    table.rows.push_back(row);
  }
  if (!header_seen) throw Error(ErrorCode::MissingColumn, "price file has no header row");
  if (table.rows.size() < 2)
    throw Error(ErrorCode::InsufficientData, "price file needs at least 2 rows");

  std::vector<double> spacing;
  spacing.reserve(table.rows.size() - 1);
  for (std::size_t k = 1; k < table.rows.size(); ++k)
    spacing.push_back(table.rows[k].time - table.rows[k - 1].time);
  std::vector<double> sorted = spacing;
  const std::size_t mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
  double median = sorted[mid];
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  table.dt = median;
  table.irregular = std::any_of(spacing.begin(), spacing.end(), [&](double s) {
    return std::abs(s - median) > 1e-9 * std::max(1.0, median);
  });
  return table;
}

PriceTable load_prices(const std::filesystem::path& path, const ColumnConfig& cols) {
  auto in = open_input(path);
  return load_prices(in, cols);
}

SampleSeries price_to_logprice(const PriceTable& table) {
  if (table.rows.empty()) throw Error(ErrorCode::InsufficientData, "empty price table");
  Eigen::VectorXd y(static_cast<Eigen::Index>(table.rows.size()));
  for (std::size_t k = 0; k < table.rows.size(); ++k)
    y[static_cast<Eigen::Index>(k)] =
        table.log_values ? table.rows[k].price : std::log(table.rows[k].price);
  return SampleSeries(table.dt, 0.0, std::move(y));
}

N0Calibration calibrate_n0(const SampleSeries& y) {
  if (y.size() < kMinCalibrationSamples)
    throw Error(ErrorCode::InsufficientData,
                "n0 calibration needs at least " + std::to_string(kMinCalibrationSamples) +
                    " samples");
  const Eigen::Index m = y.size() - 1;
  const Eigen::VectorXd d = y.values().tail(m) - y.values().head(m);
  const double var = sample_variance(d);
  const double scale = d.cwiseAbs().maxCoeff();
  N0Calibration c;
  c.degenerate = !(var > 1e-24 * scale * scale);
  c.n0 = c.degenerate ? 0.0 : var / y.dt();
  return c;
}

}  // namespace iwn
