#pragma once

#include <stdexcept>
#include <string>

#include "spinsq/types.hpp"

namespace spinsq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested Hilbert-space dimension exceeds the configured guard.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, Index requested, Index limit)
      : Error(what + ": dimension " + std::to_string(requested) + " exceeds guard " +
              std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}

  Index requested() const { return requested_; }
  Index limit() const { return limit_; }

 private:
  Index requested_;
  Index limit_;
};

/// A criterion needs a constant that is only known numerically for this spin.
class UnsupportedConstant : public Error {
 public:
  using Error::Error;
};

/// A threshold scan found no usable bracket or a non-monotone verdict.
class ScanError : public Error {
 public:
  using Error::Error;
};

/// An internal cross-check between two computation routes failed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinsq
