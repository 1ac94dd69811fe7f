#pragma once

namespace kolflow {

/// Command line entry point. Exit codes: 0 success, 2 configuration errors,
/// 3 tripped guards, 4 numeric failures, 1 anything else.
int run_cli(int argc, char** argv);

}  // namespace kolflow
