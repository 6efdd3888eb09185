#pragma once

#include <stdexcept>
#include <string>

namespace lmbo {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A kernel table could not reach the requested tail tolerance within its radius cap.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_bound_(achieved) {}

    double achieved_bound() const noexcept { return achieved_bound_; }

private:
    double achieved_bound_;
};

/// The finite window is too small to emulate the infinite lattice.
class PaddingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Generic numerical breakdown (step-size underflow, bracketing failure, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace lmbo
