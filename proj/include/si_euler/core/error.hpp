#pragma once

#include <stdexcept>
#include <string>

namespace si_euler {

/// Failure categories; the CLI maps them one-to-one onto process exit codes.
enum class ErrorCategory : int {
  config = 1,
  numerical = 2,
  resolution_exhausted = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Bad user input: malformed config, violated preconditions on arguments.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

/// The numerics broke down (crossing markers, Newton divergence, ...).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCategory::numerical, what) {}
};

class ResolutionExhausted : public Error {
 public:
  explicit ResolutionExhausted(const std::string& what)
      : Error(ErrorCategory::resolution_exhausted, what) {}
};

}  // namespace si_euler
