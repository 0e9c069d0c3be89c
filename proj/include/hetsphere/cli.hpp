#pragma once

#include <iosfwd>

namespace hetsphere {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,
  kExitInvalidConfig = 2,
  kExitInvalidDensity = 3,
  kExitNonConverged = 4,
  kExitNotPositiveDefinite = 5,
};

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hetsphere
