#ifndef DIGAPPROX_ERRORS_HPP
#define DIGAPPROX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace digapprox {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or inputs that violate a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A directed-information lookup hit a (target, parent set) pair that was never cached.
class UncachedParentSet : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Singular regressions, failed factorizations, non-stationary models.
class NumericalError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// No finite-weight arborescence exists.
class InfeasibleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Unreadable, unwritable or malformed files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace digapprox

#endif  // DIGAPPROX_ERRORS_HPP
