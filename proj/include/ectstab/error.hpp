#pragma once

#include <stdexcept>
#include <string>

namespace ectstab {

/// Error categories. The CLI maps each category onto a process exit code.
enum class ErrorKind {
  io,            ///< missing or unreadable input
  validation,    ///< malformed input or violated precondition
  incompatible,  ///< two inputs that cannot be compared
  runtime,       ///< numerical failure during computation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::validation, what);
}

}  // namespace ectstab
