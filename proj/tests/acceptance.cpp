// Acceptance run: one line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "iwn/report.hpp"
#include "iwn/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 42;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

double kv_value(const std::string& kv, const std::string& key) {
  const auto pos = kv.find("\n" + key + "=");
  if (pos == std::string::npos) return std::nan("");
  return std::strtod(kv.c_str() + pos + key.size() + 2, nullptr);
}

// Drives the built binary end to end: simulate -> CSV -> analyze in two
// sibling directories with identical arguments. Expects exit 0, n0 within
// 2% and byte-identical report files.
bool binary_round_trip(std::string& note) {
  const fs::path dir = fs::path(IWN_TEST_TMPDIR) / "acceptance_work";
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  const std::string bin = quoted(IWN_BINARY);
  const double n0 = 1e-4;

  const int sim = shell(bin + " simulate --seed 42 --n0 0.0001 --steps 100000 --emit price --s0 100 --out " +
                        quoted(dir / "prices.csv") + " 2>/dev/null");
  if (sim != 0) {
    note = "simulate exited " + std::to_string(sim);
    return false;
  }
  int codes[2];
  for (int i = 0; i < 2; ++i)
    codes[i] = shell("cd " + quoted(dir / (i ? "b" : "a")) + " && " + bin +
                     " analyze ../prices.csv --out report.txt 2>/dev/null");
  if (codes[0] != 0 || codes[1] != 0) {
    note = "analyze exited " + std::to_string(codes[0]) + "/" + std::to_string(codes[1]);
    return false;
  }
  const std::string kv = slurp(dir / "a" / "report.txt.kv");
  if (kv.empty() || slurp(dir / "a" / "report.txt") != slurp(dir / "b" / "report.txt") ||
      kv != slurp(dir / "b" / "report.txt.kv")) {
    note = "analyze reports differ";
    return false;
  }
  const double measured = kv_value(kv, "returns.n0.measured");
  const bool n0_ok = std::abs(measured / n0 - 1.0) <= 0.02;
  note = "binary: n0=" + iwn::format_number(measured) + (n0_ok ? "" : "(FAIL)") +
         ", exit 0, identical reports";
  return n0_ok;
}

}  // namespace

int main() {
  int failures = 0;
  int index = 0;
  for (const auto& suite : iwn::verify::suites()) {
    ++index;
    iwn::verify::Options opt;
    opt.seed = kSeed;
    opt.flags = "acceptance --seed 42";
    const iwn::VerificationReport rep = suite.run(opt);

    bool pass = rep.pass();
    std::ostringstream summary;
    for (const auto& c : rep.entries) {
      if (c.informational) continue;
      summary << ' ' << c.id << '=' << iwn::format_number(c.measured) << (c.pass ? "" : "(FAIL)");
    }
    if (suite.name == "roundtrip") {
      std::string note;
      const bool ok = binary_round_trip(note);
      pass = pass && ok;
      summary << "; " << note;
    }
    if (!pass) {
      ++failures;
      rep.render_text(std::cerr);
    }
    std::printf("[%s] criterion %d: %.*s |%s\n", pass ? "PASS" : "FAIL", index,
                static_cast<int>(suite.title.size()), suite.title.data(), summary.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
