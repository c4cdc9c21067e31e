#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gplab::cli {

/// Exit codes: 0 success, 1 numeric failure or failed report row,
/// 2 usage error, 3 solver failure during `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolver = 3;

/// Runs one command line (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gplab::cli
