#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wfb::cli {

enum ExitCode : int { kOk = 0, kBoundViolation = 1, kUsageError = 2 };

/// Runs one CLI invocation. `args` excludes the program name. Tables go to
/// `out` (or --out PATH); diagnostics and summaries go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace wfb::cli
