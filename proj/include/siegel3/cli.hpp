// Command-line front end shared by the siegel3 tool and the tests.
#pragma once

#include <iosfwd>

namespace siegel3 {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand.  Returns 0 when every check passes, 1 when any check
/// fails or the computation raises, 2 on a usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace siegel3
