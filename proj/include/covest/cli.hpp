#pragma once

#include <iosfwd>

namespace covest {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;    // bad arguments, config or input file
inline constexpr int numeric = 3;  // solver or eigensolver failure
}  // namespace exit_code

/// Entry point for the `covest` tool: subcommands sweep, estimate, simulate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace covest
