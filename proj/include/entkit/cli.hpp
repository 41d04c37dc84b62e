#pragma once

#include <ostream>

namespace entkit {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolations = 1,
  kExitUsage = 2,
  kExitNumeric = 3,
};

// Entry point of the `entkit` tool. Reports go to `out` unless --out names a
// file; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace entkit
