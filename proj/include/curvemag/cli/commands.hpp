#pragma once

#include <iosfwd>

namespace curvemag::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

/// Entry point of the `curvemag` tool. envp may be null.
int run_cli(int argc, char** argv, char** envp, std::ostream& out, std::ostream& err);

}  // namespace curvemag::cli
