#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "glissando/matrix.hpp"

namespace glissando {

/// One elementary divisor exponent: exact, a precision floor, or +infinity.
struct DivisorValue {
  enum class Kind { Finite, Floor, Infinite };
  Kind kind = Kind::Finite;
  std::int64_t value = 0;  // the exponent, or the floor N for Kind::Floor

  static DivisorValue finite(std::int64_t v) { return {Kind::Finite, v}; }
  static DivisorValue floor(std::int64_t n) { return {Kind::Floor, n}; }
  static DivisorValue infinite() { return {Kind::Infinite, 0}; }

  /// Certainly >= bound.
  bool at_least(std::int64_t bound) const noexcept {
    return kind == Kind::Infinite || value >= bound;
  }
  /// "3", ">=12", or "inf".
  std::string to_string() const;

  friend bool operator==(const DivisorValue&, const DivisorValue&) = default;
};

/// Exponents s_1 <= s_2 <= ... of the Smith normal form over F_p[[t]].
struct DivisorList {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t precision = 0;
  std::vector<DivisorValue> values;  // length min(rows, cols)
};

/// 2 * dim + 8, dim the larger side.
std::size_t default_divisor_precision(const PolyMatrix& m);
/// A precision at which every reported value is exact or +infinity.
std::size_t exact_divisor_precision(const PolyMatrix& m);

/// Valuation-pivot elimination on the matrix truncated modulo t^precision.
/// Pivot choice: smallest valuation, then lowest column, then lowest row.
/// Values at or above the precision are floors, promoted to +infinity when
/// the precision exceeds every possible minor degree.
DivisorList elementary_divisors(const PolyMatrix& m, std::size_t precision);

/// s_l >= l-1 for every l. Precision defaults to default_divisor_precision
/// and doubles while a floor leaves the predicate undecided.
/// Throws ParameterError when m is not glissando.
bool check_divisor_bound(const PolyMatrix& m, std::size_t precision = 0);

}  // namespace glissando
