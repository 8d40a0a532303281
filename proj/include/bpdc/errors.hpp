#pragma once

#include <stdexcept>
#include <string>

namespace bpdc {

// Invalid configuration or arguments: bad dimensions, out-of-range
// parameters, missing hooks.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdown: non-finite values, non-convergent inner iterations.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bpdc
