#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace segre::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInputError = 2,
  kGeometryError = 3,
  kNonConvergence = 4,
};

// Runs the command line `args` (without the program name). Input documents
// not named by a file are read from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace segre::cli
