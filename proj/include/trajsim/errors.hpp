#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trajsim {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A text input could not be parsed; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DisconnectedGraph : public Error {
public:
    using Error::Error;
};

class NonPositiveWeight : public Error {
public:
    using Error::Error;
};

class UnknownVertex : public Error {
public:
    using Error::Error;
};

class EmptyQueryInterval : public Error {
public:
    using Error::Error;
};

class IntervalNotNested : public Error {
public:
    using Error::Error;
};

/// The query interval is not contained in an index's global interval;
/// callers fall back to an exact scan.
class QueryOutsideIndexInterval : public Error {
public:
    using Error::Error;
};

class IndexMissing : public Error {
public:
    using Error::Error;
};

class TooFewPoints : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace trajsim
