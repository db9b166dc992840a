#pragma once

#include <stdexcept>
#include <string>

namespace mtgai {

// Vector lengths that must agree (reward vs. objectives, mean row vs. M, ...).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A documented precondition on an argument was violated.
struct PreconditionError : std::domain_error {
    using std::domain_error::domain_error;
};

// An experiment, environment or CLI configuration is invalid.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed input document (environment config, records CSV, summary JSON).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mtgai
