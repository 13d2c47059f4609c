#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orthodec::cli {

enum ExitCode : int { kPass = 0, kNumericFailure = 1, kUsageError = 2 };

/// Runs one command line (args excludes the program name). Reports go to the
/// --out file or to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orthodec::cli
