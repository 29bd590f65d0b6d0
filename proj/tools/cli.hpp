#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kmpso::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kDataError = 2,
  kRuntimeFailure = 3,
};

/// Runs the command line `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kmpso::cli
