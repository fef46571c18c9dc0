#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cleora {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`; the return value is the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cleora
