#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mtaylor::cli {

/// Exit codes: 0 success, 1 usage or parse error, 2 numerical or domain
/// failure.
enum ExitCode : int { kSuccess = 0, kUsage = 1, kNumerical = 2 };

/// Runs one command line; `args` excludes the program name. Reports go to
/// `out` (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtaylor::cli
