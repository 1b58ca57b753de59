#ifndef PARETOHJ_TOOLS_COMMANDS_HPP
#define PARETOHJ_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace paretohj::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kSuccess = 0, kInternalFailure = 1, kUsageError = 2 };

/// Runs the `paretohj` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// argv entry point writing to stdout/stderr.
int run(int argc, char** argv);

}  // namespace paretohj::cli

#endif  // PARETOHJ_TOOLS_COMMANDS_HPP
