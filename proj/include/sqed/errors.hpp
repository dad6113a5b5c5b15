#pragma once

#include <stdexcept>
#include <string>

namespace sqed {

/// Argument outside the mathematical domain of an operation (negative order,
/// z = 0 for a singular function, |x| > 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Physically or structurally invalid input (non-increasing radii, gain media,
/// bad time grids, mismatched lengths).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver a trustworthy result: singular
/// systems, missing resonance peaks, positivity loss.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sqed
