#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eqlat {

/// Exit statuses of the command-line tool.
enum ExitStatus : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
};

/// Runs one command (`solve`, `verify`, `figure` or `sweep`); args exclude
/// the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eqlat
