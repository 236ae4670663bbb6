#pragma once

#include <stdexcept>
#include <string>

namespace subsonic {

/// Argument outside the mathematical domain of a function (rho <= 0, s <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Momentum above the critical momentum of the given Bernoulli value.
class SupersonicMomentumError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Lookup outside a tabulated range.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Inconsistent or invalid user configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to produce a usable result.
class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace subsonic
