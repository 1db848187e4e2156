#pragma once

#include <stdexcept>
#include <string>

namespace typmatch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model, layout, labeling or configuration input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Two sequences or labelings that must agree in length do not.
class LengthMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Labelings or permutations defined over different vertex sets.
class DomainMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Cycle parameters that do not describe a permutation of the requested size.
class ParameterMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// An exhaustive enumeration would exceed its configured cap.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// The ambiguity set is empty; the matcher declares failure.
class EmptyAmbiguitySetError : public Error {
 public:
  using Error::Error;
};

/// No allocation satisfies the constraints at some grid point.
class InfeasibleAllocationError : public Error {
 public:
  using Error::Error;
};

}  // namespace typmatch
