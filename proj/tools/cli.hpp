#pragma once

namespace pushopt {

/// Command-line entry point. Subcommands: run, sweep, replay, check.
/// Exit codes: 0 success, 1 run/cell failure, 2 configuration or usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace pushopt
