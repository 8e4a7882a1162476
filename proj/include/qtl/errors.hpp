#pragma once

#include <stdexcept>
#include <string>

namespace qtl {

// Failure categories surfaced by the CLI as distinct exit codes.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable, corrupt, or version-incompatible checkpoint.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qtl
