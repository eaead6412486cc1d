#pragma once

#include <stdexcept>
#include <string>

namespace arbor {

// Coarse failure categories. The CLI maps each kind to a distinct message
// prefix and exit code; library callers can switch on `kind`.
enum class ErrorKind {
  invalid_input,      // malformed or inconsistent data (bad permutation, dangling edge, ...)
  cap_exceeded,       // a resource cap would be violated (group order, ball size)
  missing_assertion,  // an operation needs a caller-supplied assertion that was not given
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& message) {
  throw Error(ErrorKind::invalid_input, message);
}

[[noreturn]] inline void throw_cap(const std::string& message) {
  throw Error(ErrorKind::cap_exceeded, message);
}

[[noreturn]] inline void throw_missing_assertion(const std::string& message) {
  throw Error(ErrorKind::missing_assertion, message);
}

}  // namespace arbor
