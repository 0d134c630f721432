#ifndef LXT_CLI_HPP_
#define LXT_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace lxt {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // usage or configuration error
  kExitData = 2,   // unreadable or malformed data
  kExitNumerical = 3,
};

/// Runs one command. `args` excludes the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lxt

#endif  // LXT_CLI_HPP_
