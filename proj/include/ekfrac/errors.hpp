#pragma once

#include <stdexcept>
#include <string>

namespace ekfrac {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs outside the mathematical domain of an operation (bad parameters,
/// poles, divergent series, non-integrable functions). The CLI maps these to
/// exit status 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A well-posed computation that failed to reach its tolerance. The CLI maps
/// these to exit status 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class PoleError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// p > q + 1 with a non-zero argument.
class DivergenceError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// p = q + 1 with |z| >= 1.
class ConvergenceError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Integrand not integrable given the function's decay metadata.
class DecayError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Mellin variable outside the strip of convergence.
class StripError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Series hit its term cap.
class NonConvergedError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Inverse Mellin contour integrand did not decay before the height cap.
class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace ekfrac
