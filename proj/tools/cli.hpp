#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clusterlab::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kNumeric = 2, kCapacity = 3 };

/// Runs one command line (args exclude the program name) and returns the
/// process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace clusterlab::cli
