#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace glissando {

/// t-adic valuation: a non-negative integer or +infinity (the zero element).
class Valuation {
 public:
  constexpr Valuation(std::int64_t v) : value_(v) {}  // NOLINT(implicit)
  static constexpr Valuation infinity() { return Valuation(kInf); }

  constexpr bool is_infinite() const noexcept { return value_ == kInf; }
  constexpr bool is_finite() const noexcept { return value_ != kInf; }
  /// Finite value. Calling this on +infinity throws.
  std::int64_t value() const;

  friend constexpr auto operator<=>(const Valuation&, const Valuation&) = default;
  friend constexpr Valuation operator+(Valuation a, Valuation b) {
    return (a.is_infinite() || b.is_infinite()) ? infinity() : Valuation(a.value_ + b.value_);
  }

  std::string to_string() const;

 private:
  static constexpr std::int64_t kInf = INT64_MAX;
  std::int64_t value_;
};

/// Dense polynomial over F_p in t, little-endian coefficients with no
/// trailing zeros. The zero polynomial has an empty coefficient vector.
class FpPoly {
 public:
  explicit FpPoly(std::uint32_t p = 2) : p_(p) {}
  /// Coefficients are reduced mod p (signed inputs allowed) and normalized.
  FpPoly(std::uint32_t p, std::vector<std::uint32_t> coeffs);
  FpPoly(std::uint32_t p, std::initializer_list<std::int64_t> coeffs);

  static FpPoly monomial(std::uint32_t p, std::uint32_t c, std::size_t degree);
  static FpPoly constant(std::uint32_t p, std::uint32_t c) { return monomial(p, c, 0); }
  static FpPoly one(std::uint32_t p) { return constant(p, 1); }

  std::uint32_t p() const noexcept { return p_; }
  const std::vector<std::uint32_t>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  std::int64_t degree() const noexcept { return static_cast<std::int64_t>(c_.size()) - 1; }
  std::uint32_t coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
  Valuation valuation() const noexcept;
  /// Exactly one nonzero term.
  bool is_monomial() const noexcept;
  std::size_t term_count() const noexcept;

  /// Remainder modulo t^n.
  FpPoly truncated(std::size_t n) const;
  /// Product with t^s.
  FpPoly shifted(std::size_t s) const;
  FpPoly scaled(std::uint32_t c) const;

  FpPoly operator-() const;
  FpPoly& operator+=(const FpPoly& g);
  FpPoly& operator-=(const FpPoly& g);
  friend FpPoly operator+(FpPoly f, const FpPoly& g) { return f += g; }
  friend FpPoly operator-(FpPoly f, const FpPoly& g) { return f -= g; }
  friend FpPoly operator*(const FpPoly& f, const FpPoly& g);
  friend FpPoly mul_trunc(const FpPoly& f, const FpPoly& g, std::size_t n);
  friend bool operator==(const FpPoly&, const FpPoly&) = default;

  /// Human-readable form, e.g. "1 + 2*t + t^2"; "0" for zero.
  std::string to_string() const;

 private:
  void normalize();

  std::uint32_t p_;
  std::vector<std::uint32_t> c_;
};

/// f*g mod t^n.
FpPoly mul_trunc(const FpPoly& f, const FpPoly& g, std::size_t n);
/// Ring operations on possibly truncated values: exact when n == kExact.
inline constexpr std::size_t kExact = SIZE_MAX;
FpPoly mul_mod(const FpPoly& f, const FpPoly& g, std::size_t n);

/// q, r with f = q*g + r, deg r < deg g. g must be nonzero.
std::pair<FpPoly, FpPoly> divmod(const FpPoly& f, const FpPoly& g);

/// Valuation of a value known modulo t^N: exact when below N, otherwise a floor.
struct SeriesValuation {
  std::int64_t value = 0;
  bool exact = true;

  std::string to_string() const;
  friend bool operator==(const SeriesValuation&, const SeriesValuation&) = default;
};

/// Element of F_p[[t]] known modulo t^precision.
class TruncatedSeries {
 public:
  TruncatedSeries(const FpPoly& value, std::size_t precision);

  std::uint32_t p() const noexcept { return value_.p(); }
  std::size_t precision() const noexcept { return precision_; }
  /// Canonical representative of degree < precision.
  const FpPoly& value() const noexcept { return value_; }
  SeriesValuation valuation() const noexcept;
  bool is_unit() const noexcept { return value_.coeff(0) != 0; }

  /// Multiplicative inverse of a unit, at the same precision.
  TruncatedSeries inverse() const;
  /// Exact quotient by t^v; requires valuation >= v. Precision drops by v.
  TruncatedSeries divided_by_t_power(std::size_t v) const;

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  TruncatedSeries operator-() const { return {-value_, precision_}; }

  /// Same precision and same residue.
  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  FpPoly value_;
  std::size_t precision_;
};

inline TruncatedSeries truncate(const FpPoly& f, std::size_t n) { return {f, n}; }

}  // namespace glissando
