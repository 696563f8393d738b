#include "iwn/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "iwn/estimate.hpp"
#include "iwn/ingest.hpp"
#include "iwn/noise.hpp"
#include "iwn/pipeline.hpp"
#include "iwn/price_model.hpp"
#include "iwn/theory.hpp"
#include "iwn/verify.hpp"

namespace iwn {

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct Flags {
  std::optional<std::uint64_t> seed;
  double n0 = 1.0;
  double dt = 1.0;
  std::string dist = "gaussian";
  std::size_t paths = 1;
  std::size_t steps = 1000;
  std::string emit = "noise";
  double s0 = 1.0;
  Eigen::Index segment = 0;
  double overlap = 0.5;
  std::string taper = "hann";
  std::optional<double> band_lo, band_hi;
  Eigen::Index max_lag = 20;
  bool normalize = false;
  double alpha = 0.05;
  bool printed_literal = false;
  double horizon = 1.0;
  int points = 401;
  std::string curve = "psd";
  std::optional<double> omega_max;
  std::string freq = "ordinary";
  std::string out;
  std::string format = "report";
  std::string input;
  std::string input_kind = "price";
  std::string time_col = "t";
  std::string price_col = "value";
  std::string suite = "all";
};

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

std::uint64_t resolve_seed(const Flags& f, std::ostream& err) {
  if (f.seed) return *f.seed;
  err << "[iwn] no --seed given, using default seed " << kDefaultSeed << "\n";
  return kDefaultSeed;
}

// Sends `write` to --out when given, else to `out`.
void emit_to(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  write(file);
  if (!file) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

int report_exit(const VerificationReport& rep, const Flags& f, std::ostream& out) {
  const bool csv = f.format == "csv";
  emit_to(f.out, out, [&](std::ostream& os) {
    if (csv)
      rep.render_csv(os);
    else
      rep.render_text(os);
  });
  if (!f.out.empty()) emit_to(f.out + ".kv", out, [&](std::ostream& os) { rep.render_kv(os); });
  return rep.pass() ? kExitOk : kExitClaimFailed;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int cmd_simulate(const Flags& f, std::ostream& out, std::ostream& err) {
  SimulateOptions opt;
  opt.spec = NoiseSpec{f.n0, parse_distribution(f.dist), resolve_seed(f, err)};
  opt.spec.validate();
  opt.paths = f.paths;
  opt.steps = f.steps;
  opt.dt = f.dt;
  opt.emit = parse_emit(f.emit);
  opt.s0 = f.s0;
  if (opt.paths == 0) throw Error(ErrorCode::EmptyRequest, "--paths must be >= 1");
  if (opt.steps == 0) throw Error(ErrorCode::EmptyRequest, "--steps must be >= 1");
  if (opt.steps > ensemble_sample_cap() / opt.paths)
    throw Error(ErrorCode::ResourceLimit, "paths x steps exceeds the ensemble cap of " +
                                              std::to_string(ensemble_sample_cap()));

  std::vector<std::string> comments = {
      "generator=iwn " + std::string(kToolkitVersion) + " rng=" + std::string(kRngId),
      "emit=" + std::string(to_string(opt.emit)) + " n0=" + format_number(opt.spec.n0) +
          " dist=" + std::string(to_string(opt.spec.dist)) + " seed=" + std::to_string(opt.spec.seed)};

  if (f.out.empty()) {
    if (opt.paths != 1) throw Error(ErrorCode::Config, "--paths > 1 needs --out");
    write_series(out, simulate_path(opt, 0), comments);
    return kExitOk;
  }

  const std::filesystem::path target(f.out);
  const auto stem = (target.parent_path() / target.stem()).string();
  std::ostringstream manifest;
  manifest << "version=" << kToolkitVersion << "\nrng=" << kRngId << "\nn0=" << format_number(opt.spec.n0)
           << "\ndist=" << to_string(opt.spec.dist) << "\nseed=" << opt.spec.seed
           << "\ndt=" << format_number(opt.dt) << "\nsteps=" << opt.steps << "\nemit=" << to_string(opt.emit)
           << "\ns0=" << format_number(opt.s0) << "\npaths=" << opt.paths
           << "\nsamples_per_path=" << (opt.emit == Emit::Noise ? opt.steps : opt.steps + 1)
           << "\nconvention=noise variance n0/dt; integral y_0=log(s0), y_{k+1}=y_k+x_k*dt (steps+1 samples)\n";
  for (std::size_t i = 0; i < opt.paths; ++i) {
    const std::string file = opt.paths == 1 ? target.string() : stem + "_" + std::to_string(i) + ".csv";
    std::vector<std::string> c = comments;
    c.push_back("path=" + std::to_string(i) + " stream=" + std::to_string(i));
    emit_to(file, out, [&](std::ostream& os) { write_series(os, simulate_path(opt, i), c); });
    manifest << "path." << i << ".file=" << std::filesystem::path(file).filename().string() << "\npath." << i
             << ".stream=" << i << "\npath." << i << ".stream_seed=" << hex64(stream_seed(opt.spec.seed, i))
             << "\n";
  }
  emit_to(stem + ".manifest", out, [&](std::ostream& os) { os << manifest.str(); });
  return kExitOk;
}

int cmd_acf(const Flags& f, std::ostream& out, std::ostream& err) {
  if (!f.input.empty()) {
    const SampleSeries x = read_series(std::filesystem::path(f.input));
    const AcfEstimate est = sample_acf(x, f.max_lag, f.normalize);
    emit_to(f.out, out, [&](std::ostream& os) { write_acf(os, est); });
    return kExitOk;
  }
  // No input: ensemble ACF of simulated integrated paths at t = steps * dt.
  const NoiseSpec spec{f.n0, parse_distribution(f.dist), resolve_seed(f, err)};
  const Ensemble noise = generate_ensemble(spec, f.paths, f.steps, f.dt);
  Ensemble prices{spec, {}};
  for (const auto& x : noise.paths) prices.paths.push_back(integrate(x));
  std::vector<Eigen::Index> lags;
  const Eigen::Index top = std::min<Eigen::Index>(f.max_lag, static_cast<Eigen::Index>(f.steps));
  for (Eigen::Index k = 0; k <= top; ++k) lags.push_back(k);
  const AcfEstimate est = ensemble_acf(prices, static_cast<Eigen::Index>(f.steps), lags);
  emit_to(f.out, out, [&](std::ostream& os) {
    os << "# ensemble at t=" << format_number(static_cast<double>(f.steps) * f.dt) << " n0=" << format_number(spec.n0)
       << " dist=" << to_string(spec.dist) << " seed=" << spec.seed << " rng=" << kRngId << "\n";
    write_acf(os, est);
  });
  return kExitOk;
}

int cmd_psd(const Flags& f, std::ostream& out, std::ostream&) {
  if (f.input.empty()) throw Error(ErrorCode::Config, "psd needs an input series file");
  const SampleSeries x = read_series(std::filesystem::path(f.input));
  PsdEstimate est = f.segment > 0 ? averaged_psd(x, f.segment, f.overlap, parse_taper(f.taper)) : periodogram(x);
  std::optional<SlopeFit> fit;
  if (f.band_lo || f.band_hi) {
    const auto [lo, hi] = default_slope_band(x.size(), x.dt());
    fit = fit_loglog_slope(est, f.band_lo.value_or(lo), f.band_hi.value_or(hi));
  }
  if (f.freq == "angular")
    est = est.as(FreqKind::Angular);
  else if (f.freq != "ordinary")
    throw Error(ErrorCode::Config, "--freq must be ordinary|angular");
  emit_to(f.out, out, [&](std::ostream& os) {
    if (fit)
      os << "# meta: slope_fit band_lo=" << format_number(fit->band_lo) << " band_hi=" << format_number(fit->band_hi)
         << " (cycles per time unit) slope=" << format_number(fit->slope) << " r_squared="
         << format_number(fit->r_squared) << " bins=" << fit->bins << "\n";
    write_psd(os, est);
  });
  return kExitOk;
}

int cmd_analyze(const Flags& f, const std::string& flag_text, std::ostream& out, std::ostream& err) {
  if (f.input.empty()) throw Error(ErrorCode::Config, "analyze needs an input price file");
  const PriceTable table = load_prices(std::filesystem::path(f.input),
                                       ColumnConfig{f.time_col, f.price_col, f.input_kind == "logprice"});
  if (table.irregular)
    err << "[iwn] warning: irregular timestamp spacing; using median spacing dt=" << format_number(table.dt)
        << "\n";
  const SampleSeries y = price_to_logprice(table);
  AnalyzeOptions opt;
  opt.max_lag = f.max_lag;
  opt.alpha = f.alpha;
  opt.segment = f.segment > 0 ? f.segment : 1024;
  opt.overlap = f.overlap;
  opt.taper = parse_taper(f.taper);
  opt.band_lo = f.band_lo;
  opt.band_hi = f.band_hi;
  const Analysis a = analyze_logprice(y, table.irregular, opt);
  return report_exit(analysis_report(a, flag_text), f, out);
}

int cmd_theory(const Flags& f, std::ostream& out, std::ostream&) {
  const theory::TheoryParams p{f.n0, f.horizon};
  p.validate();
  const auto variant = f.printed_literal ? theory::PsdForm::PrintedLiteral : theory::PsdForm::Transform;
  const double w_max = f.omega_max.value_or(8.0 * std::numbers::pi / p.horizon);
  if (f.curve == "psd") {
    emit_to(f.out, out, [&](std::ostream& os) { theory::write_psd_curve(os, p, variant, f.points, w_max); });
  } else if (f.curve == "acf") {
    emit_to(f.out, out, [&](std::ostream& os) { theory::write_acf_curve(os, p, f.points); });
  } else if (f.curve == "both") {
    if (f.out.empty()) throw Error(ErrorCode::Config, "--curve both needs --out");
    const std::filesystem::path target(f.out);
    const auto stem = (target.parent_path() / target.stem()).string();
    emit_to(stem + "_psd.csv", out, [&](std::ostream& os) { theory::write_psd_curve(os, p, variant, f.points, w_max); });
    emit_to(stem + "_acf.csv", out, [&](std::ostream& os) { theory::write_acf_curve(os, p, f.points); });
  } else {
    throw Error(ErrorCode::Config, "--curve must be psd|acf|both");
  }
  return kExitOk;
}

int cmd_verify(const Flags& f, const std::string& flag_text, std::ostream& out, std::ostream& err) {
  verify::Options opt;
  opt.seed = resolve_seed(f, err);
  opt.flags = flag_text;
  return report_exit(verify::run_suite(f.suite, opt), f, out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"iwn: integrated white-noise price model toolkit", "iwn"};
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);

  auto add_noise = [&](CLI::App* c) {
    c->add_option("--seed", f.seed, "64-bit seed (default 42, logged)");
    c->add_option("--n0", f.n0, "noise intensity N0")->check(CLI::PositiveNumber);
    c->add_option("--dt", f.dt, "time step in time units")->check(CLI::PositiveNumber);
    c->add_option("--dist", f.dist, "gaussian|uniform|rademacher");
    c->add_option("--paths", f.paths, "number of independent paths");
    c->add_option("--steps", f.steps, "noise samples per path");
  };
  auto add_spectral = [&](CLI::App* c) {
    c->add_option("--segment", f.segment, "segment length (power of two)");
    c->add_option("--overlap", f.overlap, "segment overlap fraction in [0, 1)");
    c->add_option("--taper", f.taper, "rectangular|hann");
    c->add_option("--band-lo", f.band_lo, "slope band lower edge (cycles per time unit)");
    c->add_option("--band-hi", f.band_hi, "slope band upper edge (cycles per time unit)");
  };
  auto add_output = [&](CLI::App* c) {
    c->add_option("--out", f.out, "output path (default stdout)");
    c->add_option("--format", f.format, "csv|report");
  };

  auto* simulate = app.add_subcommand("simulate", "generate white noise or integrated paths");
  add_noise(simulate);
  simulate->add_option("--emit", f.emit, "noise|logprice|price");
  simulate->add_option("--s0", f.s0, "starting price for logprice/price output")->check(CLI::PositiveNumber);
  add_output(simulate);

  auto* acf = app.add_subcommand("acf", "sample ACF of a series file, or ensemble ACF of simulated paths");
  acf->add_option("file", f.input, "series CSV (t,value); omit for ensemble mode");
  acf->add_option("--max-lag", f.max_lag, "largest lag in samples");
  acf->add_flag("--normalize", f.normalize, "divide by the zero-lag value");
  add_noise(acf);
  add_output(acf);

  auto* psd = app.add_subcommand("psd", "periodogram or averaged PSD of a series file");
  psd->add_option("file", f.input, "series CSV (t,value)")->required();
  add_spectral(psd);
  psd->add_option("--freq", f.freq, "ordinary|angular frequency axis");
  add_output(psd);

  auto* analyze = app.add_subcommand("analyze", "price CSV in, model diagnostics report out");
  analyze->add_option("file", f.input, "price CSV")->required();
  analyze->add_option("--time-col", f.time_col, "timestamp column (ISO date or number)");
  analyze->add_option("--price-col", f.price_col, "price column");
  analyze->add_option("--input", f.input_kind, "price|logprice: what the price column holds");
  analyze->add_option("--max-lag", f.max_lag, "whiteness test lags");
  analyze->add_option("--alpha", f.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  add_spectral(analyze);
  add_output(analyze);

  auto* theory_cmd = app.add_subcommand("theory", "dump closed-form ACF / PSD curves");
  theory_cmd->add_option("--n0", f.n0, "noise intensity N0")->check(CLI::PositiveNumber);
  theory_cmd->add_option("--horizon", f.horizon, "observation horizon T")->check(CLI::PositiveNumber);
  theory_cmd->add_option("--points", f.points, "grid points");
  theory_cmd->add_option("--curve", f.curve, "psd|acf|both");
  theory_cmd->add_option("--omega-max", f.omega_max, "PSD grid half-width in radians per time unit");
  theory_cmd->add_flag("--paper-eq12-literal", f.printed_literal,
                       "use the printed sinc^2(omega T) variant (non-normative)");
  add_output(theory_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run the model verification suites");
  verify_cmd->add_option("--suite", f.suite, "all|acf|variance|spectrum|zero-frequency|wiener-khinchin|"
                                             "main-lobe|whiteness|displacement|roundtrip|speed");
  verify_cmd->add_option("--seed", f.seed, "64-bit seed (default 42, logged)");
  add_output(verify_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string flag_text = join_args(args);
  try {
    if (f.format != "report" && f.format != "csv")
      throw Error(ErrorCode::Config, "--format must be csv|report");
    if (!(f.overlap >= 0.0 && f.overlap < 1.0)) throw Error(ErrorCode::Config, "--overlap must lie in [0, 1)");
    if (f.input_kind != "price" && f.input_kind != "logprice")
      throw Error(ErrorCode::Config, "--input must be price|logprice");
    if (*simulate) return cmd_simulate(f, out, err);
    if (*acf) return cmd_acf(f, out, err);
    if (*psd) return cmd_psd(f, out, err);
    if (*analyze) return cmd_analyze(f, flag_text, out, err);
    if (*theory_cmd) return cmd_theory(f, out, err);
    if (*verify_cmd) return cmd_verify(f, flag_text, out, err);
  } catch (const Error& e) {
    err << "iwn: error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace iwn
