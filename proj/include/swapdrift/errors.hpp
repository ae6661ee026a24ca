#pragma once

#include <stdexcept>
#include <string>

namespace swapdrift {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition or type invariant.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A ratio estimator was asked for a value whose denominator is zero or
/// statistically indistinguishable from zero.
class UndefinedRatio : public Error {
 public:
  using Error::Error;
};

/// A quantity that upstream invariants guarantee is in range was not.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// The request exceeds an enumeration bound.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace swapdrift
