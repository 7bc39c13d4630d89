#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hmrfcs::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
};

/// Entry point of the `hmrf-cs` tool. `args[0]` is the program name.
/// Subcommands: segment, evaluate, phantom, bench.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count from HMRF_CS_THREADS (unset or 0 = all hardware threads).
unsigned threads_from_environment();

}  // namespace hmrfcs::cli
