#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dbar {

/// Bad input: violated preconditions, malformed configuration, arity mismatch.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Expression text that does not follow the grammar.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : ValidationError(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// NaN/Inf values, division by zero, singular or near-singular evaluation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dbar
