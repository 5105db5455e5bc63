#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smc::cli
{
/// Exit statuses of the command-line tool.
enum ExitCode : int
{
  exit_ok = 0,
  exit_check_failed = 1,
  exit_usage = 2,
  exit_numerical = 3,
};

/// Entry point behind the `smc` executable. `args` excludes the program name.
/// Results go to `out`, diagnostics and log lines to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace smc::cli
