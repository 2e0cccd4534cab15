#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace annofilter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` unless --output names a file; warnings and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace annofilter::cli
