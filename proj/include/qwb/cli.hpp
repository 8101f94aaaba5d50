#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qwb {

/// Exit codes of the command line tool.
enum ExitCode : int { kExitPass = 0, kExitUsage = 1, kExitIdentityFailure = 2, kExitStagnation = 3 };

/// Runs the tool on argv[1..]. Reports go to `out` (or to --report), diagnostics
/// to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwb
