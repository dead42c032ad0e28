#pragma once

#include <stdexcept>
#include <string>

namespace lowrank {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operand shapes are incompatible (or entries violate a documented domain,
// e.g. probabilities outside [0, 1]).
struct DimensionMismatchError : Error {
  using Error::Error;
};

// An operation that needs a nonzero matrix received one with
// ||G||_F below the zero threshold.
struct ZeroMatrixError : Error {
  using Error::Error;
};

// An iteration budget was exhausted before the convergence test passed.
struct NonConvergedError : Error {
  using Error::Error;
};

// A design/Gram matrix is numerically singular where strict positive
// curvature is required.
struct SingularDesignError : Error {
  using Error::Error;
};

// A candidate pool was empty where at least one atom is required.
struct EmptyPoolError : Error {
  using Error::Error;
};

// A file could not be read or written in the expected format.
struct IoError : Error {
  using Error::Error;
};

}  // namespace lowrank
