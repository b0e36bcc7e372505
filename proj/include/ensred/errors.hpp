#pragma once

#include <stdexcept>

namespace ensred {

/// Malformed or invalid configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Failed file or directory operation (CLI exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ensred
