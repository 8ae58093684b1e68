#pragma once

#include <stdexcept>
#include <string>

namespace polariton {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration problems. The CLI maps these to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, int line)
        : ConfigError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnknownKeyError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Numerical failures. The CLI maps these to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class MissingFieldError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class EmptyWeightError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class WindowOutOfRangeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FitRangeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateFitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// File system failures. The CLI maps these to exit code 4.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace polariton
