#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bjgauss::cli {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kSuccess = 0,
  kInvalidArguments = 1,
  kBreakdown = 2,
  kNumericalFailure = 3,
};

/// Runs one command line (without the program name). Results go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, enough to round-trip any finite double. Non-finite
/// values print as inf, -inf or nan.
std::string format_number(double v);

}  // namespace bjgauss::cli
