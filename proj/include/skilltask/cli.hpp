#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skilltask::cli {

enum ExitCode : int {
  kSuccess = 0,
  kIoFailure = 1,
  kValidationFailure = 2,
  kPropertyViolation = 3,
};

// Runs `skilltask <args...>` (args exclude the program name). Human-readable
// results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skilltask::cli
