#pragma once

#include <stdexcept>
#include <string>

namespace jchain {

enum class ErrorKind {
  InvalidSpec,
  OutOfSupport,
  NonTerminating,
  DenominatorPole,
  ZeroScale,
  ConvergenceFailure,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::OutOfSupport: return "OutOfSupport";
    case ErrorKind::NonTerminating: return "NonTerminating";
    case ErrorKind::DenominatorPole: return "DenominatorPole";
    case ErrorKind::ZeroScale: return "ZeroScale";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
  }
  return "Unknown";
}

}  // namespace jchain
