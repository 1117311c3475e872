#pragma once

#include <stdexcept>
#include <string>

namespace trajkit {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed files, bad flags, mismatched inputs. CLI exit code 2.
struct InputError : Error {
    using Error::Error;
};

/// Geometrically degenerate data (too few cameras, zero spacing, rank
/// deficiency). CLI exit code 3.
struct DegenerateError : Error {
    using Error::Error;
};

}  // namespace trajkit
