#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hur {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by expression evaluation: sqrt of a negative, division by zero,
/// non-real pow, or any non-finite intermediate.
class DomainError : public Error {
public:
    using Error::Error;
};

class MissingBinding : public Error {
public:
    explicit MissingBinding(const std::string& name)
        : Error("missing binding for variable '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Two fields (or a field and a problem) live on different grids.
class DomainMismatch : public Error {
public:
    using Error::Error;
};

/// Invalid Domain parameters (n < 3, L <= 0, ...).
class InvalidDomain : public Error {
public:
    using Error::Error;
};

class QOutOfRange : public Error {
public:
    using Error::Error;
};

class LgNOutOfRange : public Error {
public:
    using Error::Error;
};

class CertificateIncomplete : public Error {
public:
    using Error::Error;
};

} // namespace hur
