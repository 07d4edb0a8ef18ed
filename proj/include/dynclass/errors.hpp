#pragma once

#include <stdexcept>
#include <string>

namespace dynclass {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wrong or inconsistent dimensions (zero-dimensional field, bounds arity, ...).
class DimensionError final : public Error {
public:
    using Error::Error;
};

/// A field evaluation produced a non-finite component.
class EvaluationError final : public Error {
public:
    EvaluationError(const std::string& what, long component)
        : Error(what), component_(component) {}
    explicit EvaluationError(const std::string& what) : Error(what) {}

    /// Index of the offending output component, or -1 when unknown.
    long component() const noexcept { return component_; }

private:
    long component_ = -1;
};

class UnknownModelError final : public Error {
public:
    using Error::Error;
};

class UnknownParameterError final : public Error {
public:
    using Error::Error;
};

class SingularMatrixError final : public Error {
public:
    using Error::Error;
};

/// An iterative numerical routine failed to converge.
class NumericalError final : public Error {
public:
    using Error::Error;
};

/// Adaptive step size underflow; the problem looks stiff at time t.
class StiffnessError final : public Error {
public:
    StiffnessError(const std::string& what, double t) : Error(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_ = 0.0;
};

class NotASaddleError final : public Error {
public:
    using Error::Error;
};

class InvalidOrbitError final : public Error {
public:
    using Error::Error;
};

/// Model text diagnostics; always carries a 1-based line and column.
class ParseError final : public Error {
public:
    ParseError(int line, int col, const std::string& message)
        : Error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                ": " + message),
          line_(line), col_(col) {}

    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }

private:
    int line_ = 0;
    int col_ = 0;
};

} // namespace dynclass
