#pragma once

#include <ostream>

namespace macpol::cli {

enum ExitStatus : int {
  kSuccess = 0,   // success or policy allow
  kDenied = 1,    // deny, infeasible config, or unmet expectation
  kUsage = 2,     // bad arguments or unreadable / malformed input
};

// Entry point shared by the macpol binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace macpol::cli
