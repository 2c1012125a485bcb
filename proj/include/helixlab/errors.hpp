#pragma once

#include <stdexcept>
#include <string>

namespace helixlab {

// Base for everything this library throws. Callers that sweep grids catch
// per-point GeometryError/EvalError and keep going; nothing here aborts.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expression text could not be parsed. `position` is a 0-based offset into
// the input string.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos + 1) + ")"), position(pos) {}
    std::size_t position;
};

// Evaluation hit a domain restriction (log of non-positive, sqrt of
// negative, division by zero). Carries the offending subexpression.
struct EvalError : Error {
    EvalError(const std::string& msg, std::string subexpr)
        : Error(msg + " in subexpression " + subexpr), subexpression(std::move(subexpr)) {}
    std::string subexpression;
};

// Numeric/geometric failures at a point.
struct GeometryError : Error {
    using Error::Error;
};

struct SingularPointError : GeometryError {
    using GeometryError::GeometryError;
};

struct OutOfDomainError : GeometryError {
    using GeometryError::GeometryError;
};

// Configuration outside the supported range of an operation, e.g. the
// helix system residual at theta = 0 or pi/2.
struct DegenerateConfigError : GeometryError {
    using GeometryError::GeometryError;
};

// Bad user-facing input: unknown catalog name, malformed manifold file,
// inconsistent dimensions.
struct InputError : Error {
    using Error::Error;
};

} // namespace helixlab
