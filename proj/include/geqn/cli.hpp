#pragma once

#include <iosfwd>

namespace geqn {

/// Command-line entry point. Data goes to `out`, diagnostics to `err`.
/// Exit codes: 0 success, 1 failed certificate or non-convergence, 2 usage
/// or parse error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geqn
