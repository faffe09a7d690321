#pragma once

#include <stdexcept>
#include <string>

namespace tvnet {

/// Base class for all library errors. The message is prefixed with the
/// module that raised it, e.g. "lpoly: ...".
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (bad line, value out of range).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A domain invariant was violated (self-loop, non-binary entry, bad grid).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The local polynomial design matrix is singular at the query time.
class SingularDesignError : public Error {
public:
    using Error::Error;
};

/// Degree calibration of a generator cannot reach the requested target.
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure while reading or writing artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace tvnet
