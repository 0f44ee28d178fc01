#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lotto::cli {

/// Runs one CLI invocation. argv excludes the program name. Results go to
/// `out`, diagnostics to `err`. Exit codes: 0 success, 1 input/usage error,
/// 2 verification failure.
int run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err);

}  // namespace lotto::cli
