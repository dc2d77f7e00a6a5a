#pragma once

#include <stdexcept>
#include <string>

namespace gumorph {

/// Base for every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class SchemaViolation : public Error {
 public:
  using Error::Error;
};

class UnknownBundle : public Error {
 public:
  using Error::Error;
};

class UnknownClass : public Error {
 public:
  using Error::Error;
};

class EmptyTrainingSet : public Error {
 public:
  using Error::Error;
};

class BundleNotRegistered : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class MismatchedTestSets : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace gumorph
