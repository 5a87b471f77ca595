#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fpp::cli {

// Exit codes besides the per-ErrorKind codes (see fpp::ErrorKind).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. Reports and tables go
/// to `out` unless an --output path is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fpp::cli
