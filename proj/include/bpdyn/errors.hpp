#pragma once

#include <stdexcept>
#include <string>

namespace bpdyn {

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN or Inf encountered in a numeric input.
class NonFiniteInput : public Error {
public:
    using Error::Error;
};

// The right-hand side is not reachable with the currently positive weights
// (the hard-zero coordinates cannot carry the required solution).
class InfeasibleOnSupport : public Error {
public:
    using Error::Error;
};

// Graph has no source-sink path.
class DisconnectedInstance : public Error {
public:
    using Error::Error;
};

// Constraint matrix does not have full row rank.
class RankDeficient : public Error {
public:
    using Error::Error;
};

// Accuracy parameter outside (0, 1/2).
class BadEpsilon : public Error {
public:
    using Error::Error;
};

// energy() saw a nonzero flow entry paired with a zero weight.
class ZeroWeightNonzeroFlow : public Error {
public:
    using Error::Error;
};

// barrier() requires strictly positive weights.
class NonPositiveWeight : public Error {
public:
    using Error::Error;
};

// Submatrix enumeration would exceed the exact-alpha budget.
class TooLargeForExactAlpha : public Error {
public:
    using Error::Error;
};

// Basis enumeration would exceed the oracle budget.
class TooLargeForOracle : public Error {
public:
    using Error::Error;
};

// File could not be read, written, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

// Generic contract violation (bad sizes, invalid configuration, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace bpdyn
