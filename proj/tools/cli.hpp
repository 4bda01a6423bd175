#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dnse::cli {

/// Exit codes shared by every command.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kNoConvergence = 3,
  kSingularJacobian = 4,
};

/// Runs the command line `args` (args[0] is the program name). Human-readable
/// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dnse::cli
