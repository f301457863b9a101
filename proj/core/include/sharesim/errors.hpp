#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sharesim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model configuration or sweep plan.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure (unreadable/unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `line` is 1-based and refers to the offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

// A chain reached max_chain_length without terminating; the configured
// continuation probabilities are too close to 1 for the cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

// gamma_hat >= 1 - epsilon for a variant: the geometric closed form
// 1/(1 - gamma_hat) has no usable value. Callers decide whether to drop or
// flag the affected estimate.
class DegenerateEstimateError : public Error {
 public:
  DegenerateEstimateError(const std::string& message, int variant)
      : Error(message), variant_(variant) {}

  int variant() const { return variant_; }

 private:
  int variant_;
};

}  // namespace sharesim
