#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flowsched::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,         ///< bad arguments or unreadable input
    kResource = 2,      ///< a solver refused its budget
    kInternal = 3,      ///< an invariant failed; never expected
    kNegative = 4,      ///< the check ran and said no (missed deadline, invalid schedule)
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics and wall times to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace flowsched::cli
