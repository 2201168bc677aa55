#pragma once

#include <stdexcept>

namespace tdteach {

/// Raised when a caller breaks an operation's documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised for malformed external input: config files, logs, wire messages.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tdteach
