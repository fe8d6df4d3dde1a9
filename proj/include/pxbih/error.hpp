#pragma once

#include <stdexcept>
#include <string>

namespace pxbih {

enum class ErrorKind {
  kInvalidGrid,
  kInvalidField,
  kGridMismatch,
  kInvalidArgument,
  kHypothesisFailure,
  kOutOfRegime,
  kUndefinedBranch,
  kValleyNotFound,
  kNumerical,
  kConfig,
  kIo,
};

const char* to_string(ErrorKind kind);

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pxbih
