#pragma once

#include <stdexcept>
#include <string>

namespace polypick {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument: dimension mismatch, malformed input, violated invariant.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// An exponent of the operand exceeds the reflection degree bound.
class DominationError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Denominator polynomial vanishes inside the open polydisc.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// Evaluation requested at (or too close to) a denominator zero.
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// Root-pair cancellation could not be decided at the working tolerance.
class ReductionUnstableError : public Error {
public:
    using Error::Error;
};

/// Geometric configuration does not admit the requested intersection.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// The intersection equation vanishes identically (coincident discs).
class DegenerateConfigurationError : public ConfigurationError {
public:
    using ConfigurationError::ConfigurationError;
};

/// An operation's stated precondition does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Null-vector reconstruction produced a function failing post-validation.
class ReconstructionError : public Error {
public:
    using Error::Error;
};

/// The value disc is numerically a point; two distinct solutions unavailable.
class NearUniqueError : public Error {
public:
    using Error::Error;
};

/// The requested demonstration does not apply to this configuration.
class InapplicableError : public Error {
public:
    using Error::Error;
};

/// Malformed or schema-violating serialized input.
class SchemaError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

} // namespace polypick
