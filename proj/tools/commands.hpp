#ifndef GIBBSTREE_TOOLS_COMMANDS_HPP_
#define GIBBSTREE_TOOLS_COMMANDS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace gibbstree::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitResource = 3,
  kExitCheckFailed = 4,
};

/// One line of a check report. Rows without a threshold are informational.
struct ReportRow {
  std::string test;
  std::string param;
  double statistic = 0.0;
  bool has_threshold = false;
  double threshold = 0.0;
  bool pass = true;
};

/// Runs the tool on `args` (without the program name). Data goes to `out` or
/// the --out file; diagnostics and error JSON go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

}  // namespace gibbstree::cli

#endif  // GIBBSTREE_TOOLS_COMMANDS_HPP_
