#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biphoton {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wavelength (or other argument) outside the tabulated validity interval.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Root search without a sign change in the bracket.
class NoSolutionError : public Error {
public:
    using Error::Error;
};

/// Collinear parameters passed where an emission ring is required.
class NoRingError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or crystal file. `line()` is 0 when no line applies.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Quadrature that exhausted its budget; carries the estimate reached so far.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate, double error_estimate)
        : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

}  // namespace biphoton
