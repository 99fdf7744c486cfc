#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lsalign::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kConfigError = 3,
  kDegenerate = 4,
};

// Runs one command. `args` excludes the program name. Results go to `out`,
// warnings and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsalign::cli
