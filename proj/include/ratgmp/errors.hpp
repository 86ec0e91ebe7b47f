#pragma once

#include <stdexcept>
#include <string>

namespace ratgmp {

enum class ErrorKind { Config, Domain, Numerical, Invariant };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed configuration or arguments.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

// Mathematically invalid input, e.g. a pole on the support or a degenerate map.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

// Loss of precision, non-convergence, rank loss.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

// A structural identity that must hold failed beyond tolerance.
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(ErrorKind::Invariant, what) {}
};

// Process exit code used by the command line tool.
inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Domain:
      return 2;
    case ErrorKind::Numerical:
      return 3;
    case ErrorKind::Invariant:
      return 4;
  }
  return 1;
}

}  // namespace ratgmp
