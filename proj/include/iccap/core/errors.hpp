#pragma once

#include <stdexcept>
#include <string>

namespace iccap {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unknown variable name or malformed variable naming.
struct ResolutionError : Error {
  using Error::Error;
};

/// Arguments violate an operation's precondition (overlapping sets, bad indices).
struct ArgumentError : Error {
  using Error::Error;
};

/// Value outside the mathematical domain of a function.
struct DomainError : Error {
  using Error::Error;
};

/// Dense tensor or search grid exceeds its configured cap.
struct SizeError : Error {
  using Error::Error;
};

/// A quantity that must be nonnegative came out clearly negative.
struct NumericalError : Error {
  using Error::Error;
};

/// Gaussian channel with a zero direct gain.
struct DegenerateChannelError : Error {
  using Error::Error;
};

/// Transition tensor does not have the many-to-one factorization.
struct NotManyToOneError : Error {
  using Error::Error;
};

}  // namespace iccap
