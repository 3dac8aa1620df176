#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glissando {

/// Invalid parameters: non-prime p, q not a power of p, k < 2, shape mismatch.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A truncated computation could not certify its answer.
/// `suggested_precision` is a precision at which the same request succeeds.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, std::size_t suggested_precision)
      : std::runtime_error(what), suggested_(suggested_precision) {}

  std::size_t suggested_precision() const noexcept { return suggested_; }

 private:
  std::size_t suggested_;
};

/// A verified statement failed. Carries a human-readable counterexample.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace glissando
