#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmu::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kUsageError = 2,
  kDataError = 3,
  kNumericalError = 4,
};

/// Runs one invocation. `args` excludes the program name. Machine-readable
/// output goes to `out` (or to the --out file), progress and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmu::cli
