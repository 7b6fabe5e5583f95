#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pgg::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kTooManyRoots = 3,
};

/// Runs the command line `args` (without the program name). Files go to the
/// directory given by --out; human-readable output goes to `out`, diagnostics
/// to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, locale independent.
std::string format_number(double v);

}  // namespace pgg::cli
