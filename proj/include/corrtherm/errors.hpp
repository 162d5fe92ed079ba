#pragma once

#include <stdexcept>
#include <string>

namespace corrtherm {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An input violates a documented invariant; the message names it.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// A combinatorial size limit was hit (spectrum levels or joint dimension).
class CapExceeded : public Error {
public:
    using Error::Error;
};

// A joint distribution does not reproduce the prescribed marginals.
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

// Defensive checks that should never fire on valid input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace corrtherm
