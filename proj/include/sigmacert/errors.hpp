#pragma once

#include <stdexcept>
#include <string>

namespace sigmacert {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed descriptor, character or certificate document.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string location = {})
        : Error(location.empty() ? what : location + ": " + what), location_(std::move(location)) {}
    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class UnsupportedFamily : public Error {
public:
    using Error::Error;
};

class BallTooLarge : public Error {
public:
    using Error::Error;
};

class NotAHomomorphism : public Error {
public:
    using Error::Error;
};

class NotACharacter : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SingularMap : public Error {
public:
    using Error::Error;
};

/// Sign of an exact real could not be resolved from the available enclosures.
class UndecidableSign : public Error {
public:
    using Error::Error;
};

}  // namespace sigmacert
