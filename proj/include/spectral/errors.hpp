#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent graph input; message names the offending line.
struct ParseError : Error {
  using Error::Error;
};

/// Eigensolver failed to reach the off-diagonal threshold within the sweep cap.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Rank-one update denominator within tolerance of zero.
struct SingularUpdateError : Error {
  using Error::Error;
};

/// Evaluation point coincides with an eigenvalue.
struct PoleError : Error {
  using Error::Error;
};

/// An eigenvalue sits on the wrong side of a barrier, or a potential
/// precondition does not hold.
struct BarrierViolationError : Error {
  using Error::Error;
};

/// Numerical breakdown: a quantity that is positive in exact arithmetic
/// came out non-positive, or a cached inverse lost positive definiteness.
struct DegeneracyError : Error {
  using Error::Error;
};

/// Operation requires a connected graph.
struct DisconnectedError : Error {
  using Error::Error;
};

}  // namespace spectral
