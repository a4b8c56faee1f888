#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace exporamsey::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitCapacity = 2;
inline constexpr int kExitUsage = 3;

/// Runs one command line (args[0] is the program name) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace exporamsey::cli
