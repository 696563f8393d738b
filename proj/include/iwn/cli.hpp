#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iwn {

/// Exit statuses of the `iwn` binary.
enum ExitStatus : int { kExitOk = 0, kExitClaimFailed = 1, kExitUsage = 2 };

/// Entry point of the `iwn` command line. `args` excludes the program name.
/// Reports and data go to `out` (or --out files), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace iwn
