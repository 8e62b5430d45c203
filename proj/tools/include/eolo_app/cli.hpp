#pragma once

#include <iosfwd>

namespace eolo::app {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

/// Entry point of the `eolo` tool with injectable streams. `serve` blocks
/// until SIGINT or SIGTERM.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eolo::app
