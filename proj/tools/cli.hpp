#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpspdc::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kValidation = 2,
  kSolver = 3,
  kIo = 4,
};

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpspdc::cli
