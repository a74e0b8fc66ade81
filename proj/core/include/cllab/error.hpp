#pragma once

#include <stdexcept>
#include <string>

namespace cllab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A brute-force operation would exceed its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed (e.g. |Pic0| != L(1)).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace cllab
