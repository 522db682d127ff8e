#pragma once

#include <stdexcept>
#include <string>

namespace tw {

/// Raised by every module on invalid input, I/O failure, or a violated
/// precondition. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tw
