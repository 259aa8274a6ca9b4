#pragma once

#include <stdexcept>
#include <string>

namespace mslift {

/// Malformed input: bad piece layout, negative weights, unknown JSON fields.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two objects that must live on the same interval do not.
class DomainMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A query point lies outside the interval of definition.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// An operation was called on an input violating its documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A fixed size limit of an exhaustive routine was exceeded.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A built-in verification failed. Always indicates an algorithmic bug.
class VerificationError : public std::runtime_error {
 public:
  VerificationError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace mslift
