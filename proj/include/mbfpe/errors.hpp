#pragma once

#include <stdexcept>
#include <string>

namespace mbfpe {

/// A precondition on an argument or parameter set was violated.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative kernel (series, quadrature) exhausted its budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An SDE step would carry a particle across both boundaries; retry with a smaller dt.
class StepRejected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A density update produced a negative cell value.
class PositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Config parse/validation failure carrying the source location.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, int line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          source_(std::move(source)), line_(line) {}

    const std::string& source() const { return source_; }
    int line() const { return line_; }

private:
    std::string source_;
    int line_;
};

}  // namespace mbfpe
