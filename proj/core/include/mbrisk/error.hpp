#pragma once

#include <stdexcept>
#include <string>

namespace mbrisk {

/// Raised when a model or an argument violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a well-posed computation cannot be completed
/// (non-convergence, singular system, zero-probability conditioning, ...).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model file could not be read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mbrisk
