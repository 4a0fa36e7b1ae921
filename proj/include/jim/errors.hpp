#pragma once

#include <stdexcept>
#include <string>

namespace jim {

// Root of every error the library raises. The CLI maps the subclasses onto
// exit codes (input 2, numerical/stability 3, empty result 4).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed files, bad configuration, missing paths.
class InputError : public Error {
public:
    using Error::Error;
};

// A closed-form function evaluated outside its domain.
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidParameters : public Error {
public:
    using Error::Error;
};

class InvalidSequence : public Error {
public:
    using Error::Error;
};

// Not enough observations for the requested estimator.
class InsufficientData : public Error {
public:
    using Error::Error;
};

// Spectral radius of the excitation matrix is not below one.
class StabilityError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class EmptyResultError : public Error {
public:
    using Error::Error;
};

} // namespace jim
