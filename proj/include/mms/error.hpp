#pragma once

#include <stdexcept>
#include <string>

namespace mms {

enum class ErrorKind {
  InvalidInput,
  NonMonotone,
  Overflow,
  NonIntegrable,
  MalformedPath,
  Precondition,
  AllSkipped,
  ProfileMismatch,
  NonConvergence,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-readable category alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mms
