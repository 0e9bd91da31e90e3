#pragma once

#include <stdexcept>
#include <string>

namespace fcw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical precondition was violated (zero denominator, pole outside
/// the declared set, insufficient truncation depth, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An internal identity that must hold exactly did not. Seeing one of these
/// means a bug or a truncation that was too shallow.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Malformed user input (scene files, scalar strings, expressions).
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace fcw
