#pragma once

#include <stdexcept>
#include <string>

namespace painleve {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A right-hand side or oracle was asked to divide by w = 0.
class SingularInput : public Error {
public:
    using Error::Error;
};

class UnsupportedKind : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class InvalidInitialData : public Error {
public:
    using Error::Error;
};

class InvalidTolerances : public Error {
public:
    using Error::Error;
};

class NonFiniteState : public Error {
public:
    using Error::Error;
};

class OutOfSpan : public Error {
public:
    using Error::Error;
};

class WrongKind : public Error {
public:
    using Error::Error;
};

/// A fitted quadratic does not satisfy b^2 - 4ac for its equation.
class DiscriminantViolation : public Error {
public:
    using Error::Error;
};

class NegativeW : public Error {
public:
    using Error::Error;
};

class MultipleZeros : public Error {
public:
    using Error::Error;
};

} // namespace painleve
