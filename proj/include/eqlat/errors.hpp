#pragma once

#include <stdexcept>
#include <string>

namespace eqlat {

/// Base for every error raised by the library. `code()` is a stable
/// machine-readable identifier and `exit_status()` follows the CLI contract
/// (2 = configuration/resource, 3 = numerical range).
class Error : public std::runtime_error {
 public:
  Error(std::string code, int exitStatus, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)), exit_(exitStatus) {}

  const std::string& code() const noexcept { return code_; }
  int exit_status() const noexcept { return exit_; }

 private:
  std::string code_;
  int exit_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string code = "E_CONFIG")
      : Error(std::move(code), 2, what) {}
};

/// r*sqrt(h) >= 1: kernels would stop being positive.
class AdmissibilityError : public ConfigError {
 public:
  explicit AdmissibilityError(const std::string& what)
      : ConfigError(what, "E_ADMISSIBILITY") {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what)
      : Error("E_RESOURCE", 2, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error("E_PRECONDITION", 2, what) {}
};

class NumericalRangeError : public Error {
 public:
  explicit NumericalRangeError(const std::string& what)
      : Error("E_NUMERIC", 3, what) {}
};

/// Oracle bracketing or convergence failure.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what)
      : Error("E_CONVERGENCE", 3, what) {}
};

}  // namespace eqlat
