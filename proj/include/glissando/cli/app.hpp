#pragma once

#include <ostream>

namespace glissando::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kFalsified = 1,    // a hard verification failed (or a cache entry disagreed)
  kBadParams = 2,
  kPrecision = 3,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace glissando::cli
