#pragma once

#include <stdexcept>
#include <string>

namespace bsp {

// Base of every exception thrown by the library. The CLI maps these to exit
// code 1; argument validation failures in the CLI itself map to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class ConstantColumnError : public Error {
 public:
  ConstantColumnError(const std::string& feature_id)
      : Error("constant column after centering: feature '" + feature_id + "'"),
        feature_id_(feature_id) {}

  const std::string& feature_id() const noexcept { return feature_id_; }

 private:
  std::string feature_id_;
};

// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace bsp
