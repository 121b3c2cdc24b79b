#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bisp::cli {

// Runs one CLI invocation over explicit streams (so tests can drive the
// full pipeline in-process). Returns the process exit code: 0 success,
// 1 usage error, 2 data error. Diagnostics go to err, results to out or
// the --output file.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace bisp::cli
