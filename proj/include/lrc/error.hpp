#pragma once

#include <stdexcept>
#include <string>

namespace lrc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates a domain invariant (non-finite entries, too few cases).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A scalar parameter is outside its admissible range (J, K, q, window, ...).
class ParameterError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Two matrices that must describe the same cases disagree in shape.
class ShapeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A matrix file could not be read or written, or its contents are malformed.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not produce a result for the given data.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The symmetrized k-NN graph has more than one connected component.
class DisconnectedGraphError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace lrc
