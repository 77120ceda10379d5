#pragma once

#include <stdexcept>
#include <string>

namespace twospin {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (bad parameters,
/// malformed graph, violated precondition).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The instance is too large for exhaustive evaluation or materialization.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure failed to converge or a numeric certificate
/// could not be produced.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant was violated. Never expected for valid input.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// The integer search for a self-loop/bristle gadget could not reach the
/// requested accuracy. Carries the best candidate found.
class ApproximationFailure : public Error {
 public:
  ApproximationFailure(const std::string& what, long long loops,
                       long long bristles, double residual)
      : Error(what), loops(loops), bristles(bristles), residual(residual) {}

  long long loops;
  long long bristles;
  double residual;
};

}  // namespace twospin
