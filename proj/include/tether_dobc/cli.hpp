#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tether_dobc {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
};

/// Entry point of the `tether_sim` tool: subcommands run, compare, batch and
/// check. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tether_dobc
