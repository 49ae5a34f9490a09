#pragma once

// Command-line front end. Kept in the library so tests can drive it.

#include <ostream>

namespace primerec::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kBadArguments = 2,
  kOracleMismatch = 3,
  kPrecisionExhausted = 4,
};

/// Parses argv and runs one subcommand. Tables go to `out` (or --out),
/// summaries and diagnostics to `err`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace primerec::cli
