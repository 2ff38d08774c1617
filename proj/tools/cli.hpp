#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace capgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitCertificationFailed = 2;
inline constexpr int kExitUsage = 64;

inline constexpr int kSchemaVersion = 1;

/// Runs one CLI invocation; `args` excludes the program name.
int dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err);

} // namespace capgame::cli
