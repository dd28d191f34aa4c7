#pragma once

#include <iosfwd>
#include <string>

namespace dispersia::cli {

/// Runs one CLI invocation (argv[0] is the program name). Exit codes:
/// 0 success, 2 invalid scene or flags, 3 numerical non-convergence.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Shortest decimal that round-trips to the same double; "nan" and "inf" for
/// non-finite values.
std::string format_double(double value);

}  // namespace dispersia::cli
