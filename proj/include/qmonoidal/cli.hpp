#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmon {

/// Exit codes of the command-line front end.
enum ExitCode { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitInput = 3 };

/// Runs one invocation; args excludes the program name. The report goes to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmon
