#pragma once

#include <iosfwd>

namespace entangleid::cli {

// Full command dispatch: parses argv, runs the subcommand, writes the JSON
// report to `out` and diagnostics to `err`.  Returns the process exit code:
// 0 success, 2 usage error, 3 domain or input error.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace entangleid::cli
