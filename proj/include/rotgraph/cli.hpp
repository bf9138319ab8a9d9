#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rotgraph {

// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;  // usage errors, bad input, exceeded caps

// Runs `rotgraph <args...>` (args exclude the program name). JSON results go
// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rotgraph
