#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace z2h::cli {

enum ExitCode : int {
  kOk = 0,
  kNumericFailure = 1,
  kInvalidArguments = 2,
  kBranchProximity = 3,
};

// Parses argv (argv[0] is the program name), runs one subcommand and writes
// its JSON (or CSV) document to `out`. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace z2h::cli
