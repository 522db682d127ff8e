#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tw::cli {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 on success, 1 on a processing error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tw::cli
