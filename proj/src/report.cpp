#include "iwn/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace iwn {

std::string format_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool VerificationReport::pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const ClaimResult& c) { return c.informational || c.pass; });
}

void VerificationReport::append(const VerificationReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

void VerificationReport::render_text(std::ostream& out) const {
  out << "verification report: " << suite << "\n"
      << "toolkit " << version << ", rng " << rng_id << "\n"
      << "flags: " << flags << "\n\n";
  for (const auto& c : entries) {
    out << (c.informational ? "[info] " : c.pass ? "[PASS] " : "[FAIL] ") << c.id << "\n"
        << "    law:       " << c.law << "\n"
        << "    measured:  " << format_number(c.measured) << "\n"
        << "    expected:  " << format_number(c.expected) << "\n"
        << "    tolerance: " << format_number(c.tolerance) << " (" << c.criterion << ")\n"
        << "    seed:      " << c.seed << "\n";
    for (const auto& [k, v] : c.details) out << "    " << k << ": " << v << "\n";
  }
  const auto failed = std::count_if(entries.begin(), entries.end(),
                                    [](const ClaimResult& c) { return !c.informational && !c.pass; });
  out << "\noverall: " << (pass() ? "PASS" : "FAIL") << " (" << entries.size() << " entries, "
      << failed << " failed)\n";
}

void VerificationReport::render_kv(std::ostream& out) const {
  out << "suite=" << suite << "\nversion=" << version << "\nrng=" << rng_id << "\nflags=" << flags
      << "\n";
  for (const auto& c : entries) {
    out << c.id << ".measured=" << format_number(c.measured) << "\n"
        << c.id << ".expected=" << format_number(c.expected) << "\n"
        << c.id << ".tolerance=" << format_number(c.tolerance) << "\n"
        << c.id << ".pass=" << (c.pass ? "true" : "false") << "\n"
        << c.id << ".informational=" << (c.informational ? "true" : "false") << "\n"
        << c.id << ".seed=" << c.seed << "\n";
    for (const auto& [k, v] : c.details) out << c.id << '.' << k << '=' << v << "\n";
  }
  out << "overall.pass=" << (pass() ? "true" : "false") << "\n";
}

void VerificationReport::render_csv(std::ostream& out) const {
  out << "# suite=" << suite << " version=" << version << " rng=" << rng_id << "\n"
      << "# flags=" << flags << "\n"
      << "claim_id,measured,expected,tolerance,pass\n";
  for (const auto& c : entries)
    out << c.id << ',' << format_number(c.measured) << ',' << format_number(c.expected) << ','
        << format_number(c.tolerance) << ',' << (c.informational ? "info" : c.pass ? "true" : "false")
        << "\n";
}

}  // namespace iwn
