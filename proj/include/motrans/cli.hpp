#pragma once

#include <string>
#include <vector>

namespace motrans {

/// Runs the motrans command line. `args` excludes the program name.
/// Exit codes: 0 success, 1 usage error, 2 data/validation error,
/// 3 runtime failure (divergence or unstable simulation).
int run_cli(const std::vector<std::string>& args);

}  // namespace motrans
