#pragma once

#include <stdexcept>
#include <string>

namespace walklab {

enum class ErrorKind {
  InvalidArgument,
  ConstructionDefect,
  ConnectivityDefect,
  GeneratorDefect,
  NotTreeLike,
  MalformedExcursion,
  Capacity,
  NonConvergence,
  Violation,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so that front ends can
// map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace walklab
