#pragma once

#include <stdexcept>
#include <string>

namespace svx {

// Exit codes used by the command line tool. Library code throws the typed
// exceptions below; the tool maps them to these codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitConfigError = 3,
  kExitNumericError = 4,
};

class Error : public std::runtime_error {
 public:
  Error(std::string what, int exit_code)
      : std::runtime_error(std::move(what)), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

// Malformed or unreadable input data (CSV rows, missing files).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what, kExitInputError) {}
};

// Invalid configuration: out-of-range parameters, inconsistent settings.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, kExitConfigError) {}
};

// Numerical failure at run time (non-PSD covariance, divergent moment, ...).
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what, kExitNumericError) {}
};

// Covariance embedding or joint covariance matrix is not positive
// semi-definite beyond tolerance; carries the offending eigenvalue.
class SpectralError : public NumericError {
 public:
  SpectralError(const std::string& what, double eigenvalue)
      : NumericError(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

}  // namespace svx
