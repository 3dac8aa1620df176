#pragma once

#include <cstdint>
#include <vector>

namespace glissando {

bool is_prime(std::uint64_t n);

/// Integer power with overflow detection; throws ParameterError on overflow.
std::uint64_t checked_pow(std::uint64_t base, unsigned exponent);

/// An element of the prime field F_p.
struct FpElem {
  std::uint32_t value = 0;
  std::uint32_t modulus = 2;

  friend bool operator==(const FpElem&, const FpElem&) = default;
};

/// Arithmetic context for F_p. The modulus is validated once here so that
/// the inner loops of matrix construction never re-check primality.
class PrimeField {
 public:
  /// Largest supported characteristic; products of two residues plus a
  /// long accumulation must fit in 64 bits.
  static constexpr std::uint32_t kMaxPrime = 65521;

  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }

  std::uint32_t reduce(std::int64_t x) const noexcept {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept;
  /// Inverse of a nonzero residue.
  std::uint32_t inv(std::uint32_t a) const;

  /// C(a, b) mod p by Lucas' theorem. Zero whenever a < 0, b < 0 or b > a.
  std::uint32_t binom(std::int64_t a, std::int64_t b) const noexcept;

  FpElem elem(std::int64_t x) const noexcept { return {reduce(x), p_}; }

 private:
  std::uint32_t small_binom(std::uint32_t a, std::uint32_t b) const noexcept;

  std::uint32_t p_;
  std::vector<std::uint32_t> fact_;
  std::vector<std::uint32_t> inv_fact_;
};

/// Characteristic p, q = p^e.
struct Params {
  std::uint32_t p = 2;
  std::uint32_t e = 1;
  std::uint64_t q = 2;

  /// Validates that p is prime and q is a positive power of p.
  static Params make(std::uint64_t p, std::uint64_t q);
  static Params from_exponent(std::uint64_t p, unsigned e);

  friend bool operator==(const Params&, const Params&) = default;
};

/// C(a, b) mod p. Validates p on every call; hot paths use PrimeField::binom.
FpElem binom_mod_p(std::int64_t a, std::int64_t b, std::uint64_t p);

/// C(a + p^m, b) == C(a, b) + C(a, b - p^m) in F_p.
bool check_binom_shift(std::int64_t a, std::int64_t b, unsigned m, std::uint64_t p);

}  // namespace glissando
