#pragma once

#include <stdexcept>
#include <string>

namespace gmfs {

/// Base of every error raised by the library. The CLI maps the derived
/// types onto exit codes (argument/range/config -> 2, size -> 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid caller input (bad parameters, incompatible objects).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Index outside the enumerable range of a basis or table.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Resource guard tripped before any work was done.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of refinement depth. Carries the best value
/// obtained so far.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double partial, double estimate)
        : Error(what), partial_(partial), estimate_(estimate) {}

    double partial() const noexcept { return partial_; }
    double error_estimate() const noexcept { return estimate_; }

private:
    double partial_;
    double estimate_;
};

/// Violated internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration document.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace gmfs
