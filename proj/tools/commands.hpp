#pragma once

namespace abt::cli {

// Parses argv, dispatches the subcommand, and maps failures to exit codes:
// 0 success, 2 configuration error, 3 numeric-invariant failure.
int run(int argc, char** argv);

}  // namespace abt::cli
