#pragma once

#include <stdexcept>
#include <string>

namespace fracmarkov {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Gamma evaluated at a non-positive integer.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

class DegenerateJumpError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class SmoothnessError : public Error {
public:
    using Error::Error;
};

// Kernel order class does not match the requested operator or scheme.
class ClassError : public Error {
public:
    using Error::Error;
};

class MajorantViolation : public Error {
public:
    using Error::Error;
};

class CensoringError : public Error {
public:
    using Error::Error;
};

class SingularSystemError : public Error {
public:
    using Error::Error;
};

class BoundaryMismatchError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fracmarkov
