#ifndef HATGAME_CLI_HPP
#define HATGAME_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace hatgame {

// Exit codes of the command-line tool.
inline constexpr int kExitWinning = 0;
inline constexpr int kExitLosing = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInput = 65;

// Runs one command line (args excludes the program name). Reports go to
// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hatgame

#endif
