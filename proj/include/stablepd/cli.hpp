#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stablepd {

/// Process exit codes of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitPartialFailure = 1,
  kExitMissingInput = 2,
  kExitIncompletePyramid = 3,
  kExitParseError = 4,
  kExitUsage = 64,
};

/// Entry point of the `stablepd` tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stablepd
