#pragma once

#include <stdexcept>
#include <string>

namespace diastasis {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in different variable counts, or an index has the wrong length.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A documented precondition was violated by the caller.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed potential file or builtin name.
class ParseError : public Error {
public:
    using Error::Error;
};

/// An internal invariant failed. Always a bug, never bad input.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace diastasis
