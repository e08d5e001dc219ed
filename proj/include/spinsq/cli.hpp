#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinsq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

/// Runs the command-line interface on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinsq
