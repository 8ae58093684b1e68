// cli.hpp - command-line entry point shared by the polsim tool and tests.

#pragma once

#include <ostream>

namespace polariton {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitIo = 4 };

/// Parses arguments, runs the scenario and returns the process exit code.
/// Failures are reported on `err` and, when the output directory is
/// usable, as error.json next to the other artifacts.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polariton
