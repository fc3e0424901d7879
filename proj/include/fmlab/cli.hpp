#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fmlab {

/// Entry point used by the fmlab binary.  Parses the arguments (program name
/// excluded), runs the selected subcommand, writes the JSON report to `out`
/// and diagnostics to `err`.
///
/// Exit codes: 0 when a verdict was computed (including negative or
/// budget-limited verdicts that say so), 1 on usage or input errors, 2 when a
/// budget was exhausted before any verdict could be reached.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace fmlab
