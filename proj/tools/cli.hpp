#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latcount::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInput = 2,
    kCap = 3,
};

/// Runs the tool on `args` (args[0] is the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latcount::cli
