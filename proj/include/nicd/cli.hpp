#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nicd {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitPrecondition = 3 };

/// Runs the tool on `args` (without the program name). Reports go to `out`
/// unless --output is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nicd
