#pragma once

#include <iosfwd>

namespace knotflow::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kPropertyViolation = 1,  ///< a check failed or a numerical method gave up
  kInvalidInput = 2,
};

/// Runs one command. Results go to `out` (or to the --out file), diagnostics
/// to `err`. Nothing is written to `out` or to the output file unless the
/// command finishes; a failed command leaves no partial output behind.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace knotflow::cli
