#pragma once

#include <stdexcept>
#include <string>

namespace nrbmf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A NaN or infinite value reached a validated constructor.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// One of the two complex components of the e1-e2 form is singular.
class SingularComponentError : public Error {
 public:
  SingularComponentError(int component, const std::string& what)
      : Error(what), component_(component) {}

  /// 1 for M1 (the e1 coefficient), 2 for M2 (the e2 coefficient).
  int component() const noexcept { return component_; }

 private:
  int component_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A factor or input violates its non-negativity structure.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

class EncodingFailedError : public Error {
 public:
  using Error::Error;
};

/// Cosine similarity requested with a zero-norm operand.
class ZeroEncodingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nrbmf
