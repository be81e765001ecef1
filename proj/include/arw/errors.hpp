#pragma once

#include <stdexcept>
#include <string>

namespace arw {

// Bad input data: malformed files, empty batches, out-of-range indices.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad hyperparameters or flags.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An internal invariant did not hold. Indicates a bug, not bad input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace arw
