#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cbchern {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitIdentityFalse = 1,  ///< identity checked and found false, or internal error
  kExitParse = 2,
  kExitPrecondition = 3,
  kExitHypothesis = 4,
};

/// Runs one invocation. `args` excludes the program name. Results go to `out`,
/// a one-line diagnostic to `err` on failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbchern
