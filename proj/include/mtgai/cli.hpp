#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtgai::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Subcommands: run, sweep, bounds, report.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtgai::cli
