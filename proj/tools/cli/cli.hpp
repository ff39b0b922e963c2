#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace minkinv::cli {

enum ExitStatus : int {
  exit_ok = 0,
  exit_negative = 1,  // not invertible, not ordered
  exit_input = 2,     // malformed file, unknown flag, bad dimensions
  exit_numerical = 3,
};

/// Runs one command. `args` excludes the program name. The report goes to
/// `out`, messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace minkinv::cli
