// errors.hpp — Exception types shared by all pseudomode modules

#pragma once

#include <stdexcept>
#include <string>

namespace pmode {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operator shapes or factorizations that do not fit together.
struct DimensionError : Error {
    using Error::Error;
};

// A state or parameter violates a documented precondition.
struct PreconditionError : Error {
    using Error::Error;
};

struct UnsupportedModelError : Error {
    using Error::Error;
};

// Adaptive step size collapsed; carries the last time the solution was accepted.
struct IntegrationError : Error {
    IntegrationError(const std::string& what, double last_good_time)
        : Error(what), last_good_time(last_good_time) {}
    double last_good_time;
};

struct TruncationError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace pmode
