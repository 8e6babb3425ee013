#pragma once

#include <stdexcept>
#include <string>

namespace otw {

enum class ErrorKind {
  structural,    // malformed graph or instance data
  argument,      // bad argument to an operation
  precondition,  // instance outside an algorithm's domain
  containment,   // restricted window not inside the original
  infeasible,    // no feasible walk exists
  parse,         // instance file could not be read
  guard          // request exceeds a desk-scale guard
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::argument: return "argument";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::containment: return "containment";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::parse: return "parse";
    case ErrorKind::guard: return "guard";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace otw
