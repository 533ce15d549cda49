#pragma once

#include <stdexcept>
#include <string>

namespace lgsp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Violated precondition or malformed argument (dimension mismatch,
/// duplicate tap offset, sigma <= 0, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// File I/O failure or malformed file content.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: branch tracking lost, eigenvalue on a contour,
/// aliasing because the frequency grid is too coarse. Usually fixable
/// by increasing the grid size or quadrature order.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Operation requested in a mode that does not support it, e.g. the
/// contour path with a non-holomorphic function piece.
class ModeError : public Error {
public:
    using Error::Error;
};

} // namespace lgsp
