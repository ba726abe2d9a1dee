#pragma once

#include <stdexcept>
#include <string>

namespace speclab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input document or instance is malformed or violates a field invariant.
class ParseError : public Error {
public:
    ParseError(const std::string& path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Precondition violated by the caller.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Genericity assumption failed for a spectral cover.
class GenericityError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to reach its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace speclab
