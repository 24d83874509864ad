#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rbig::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 input or configuration error, 2 finished with a
/// convergence warning (outputs are still written).
enum ExitCode : int { kOk = 0, kInputError = 1, kWarning = 2 };

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbig::cli
