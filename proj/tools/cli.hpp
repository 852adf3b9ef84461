#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tvspec::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,   ///< unexpected internal error
  kUsage = 2,     ///< bad flags, bad parameters, bad config keys
  kData = 3,      ///< unreadable or invalid input data
  kWarning = 4,   ///< configuration warnings escalated by --strict
};

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tvspec::cli
