#pragma once

#include <iosfwd>

namespace eqwave {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitCertificationFailed = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
  kExitOutOfDomain = 4,
};

/// Entry point of the `eqwave` tool; stdout and stderr are injectable for tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eqwave
