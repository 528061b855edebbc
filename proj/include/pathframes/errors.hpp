#pragma once

#include <stdexcept>
#include <string>

namespace pathframes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or finite-difference stencil left the chart box.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A frame or transition matrix is singular where it must be invertible.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A user-supplied field produced non-finite values.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A build finished but its own residual check failed.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Path or tube is self-intersecting or degenerate where injectivity is needed.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The derivation is not linear in X along the path.
class NotAConnectionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pathframes
