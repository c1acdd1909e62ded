#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nopo_cli {

// Exit codes beyond 0/1.
inline constexpr int kExitDomain = 2;
inline constexpr int kExitRegime = 3;
inline constexpr int kExitEstimation = 4;

/// Runs the command line `args` (without the program name). Tables go to
/// `out` unless an output file is requested; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nopo_cli
