#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lucas {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    /// Hypothesis or budget gate.
    kExitGate = 2,
};

/// Parses `args` (without the program name), runs one subcommand and writes
/// its output to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lucas
