#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyform::cli {

enum Exit : int {
  kOk = 0,
  kUsage = 1,          // bad flags, unreadable or malformed input
  kResource = 2,       // memory, time or network limit
  kValidation = 3,     // validator, comparison or solution check failed
  kMissingData = 4,    // no render data, or an uncached b-file offline
  kNothingToCompare = 5,
};

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace polyform::cli
