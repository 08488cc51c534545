#ifndef GI_CHANNEL_TOOLS_CLI_HPP
#define GI_CHANNEL_TOOLS_CLI_HPP

#include <iosfwd>

namespace gi_channel::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_invalid_input = 2,
    exit_numerical_failure = 3,
};

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gi_channel::cli

#endif  // GI_CHANNEL_TOOLS_CLI_HPP
