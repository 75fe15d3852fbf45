#pragma once

#include <stdexcept>
#include <string>

namespace embedlab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating input (bad JSON, asymmetric matrix, ...).
class InputError : public Error {
public:
    using Error::Error;
};

// A point fell outside the domain an evaluator was built for.
class DomainError : public Error {
public:
    using Error::Error;
};

// Floating conversion of an exact quantity would lose too much precision.
class PrecisionError : public Error {
public:
    using Error::Error;
};

// Work limit (enumeration budget, search budget) exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

// A checked mathematical property failed on concrete data.
class ViolationError : public Error {
public:
    using Error::Error;
};

}  // namespace embedlab
