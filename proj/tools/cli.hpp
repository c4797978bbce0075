#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdmp::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kNumerical = 3,
};

/// Runs one command line (without the program name). Results go to the
/// files named by --output, or to `out` when the path is "-". Summaries go
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pdmp::cli
