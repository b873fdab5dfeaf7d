#pragma once

#include <stdexcept>
#include <string>

namespace dofd {

/// Base class of every numerical failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (z on the branch cut, t <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for the given data class (e.g. Ritz projection of L2 data).
class NotApplicable : public Error {
 public:
  using Error::Error;
};

class MeshMismatch : public Error {
 public:
  using Error::Error;
};

class MismatchError : public Error {
 public:
  using Error::Error;
};

class BranchError : public Error {
 public:
  using Error::Error;
};

class ToleranceError : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// A sampled inequality of the symbol w(z) failed; the message names the sample.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace dofd
