#pragma once

#include <stdexcept>
#include <string>

namespace ndf {

// Base of every library error. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedNumber : public Error {
public:
    using Error::Error;
};

class NegativeValue : public Error {
public:
    using Error::Error;
};

// Raised by precondition checks on numeric parameters (windows, exponents, grids).
class BadParameters : public Error {
public:
    using Error::Error;
};

class BadWindow : public BadParameters {
public:
    using BadParameters::BadParameters;
};

class InfeasibleParameters : public BadParameters {
public:
    using BadParameters::BadParameters;
};

class OutOfRange : public BadParameters {
public:
    using BadParameters::BadParameters;
};

class DegenerateSamples : public BadParameters {
public:
    using BadParameters::BadParameters;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace ndf
