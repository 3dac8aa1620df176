#include "glissando/field.hpp"

#include <limits>
#include <string>

#include "glissando/errors.hpp"

namespace glissando {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
      throw ParameterError("integer power overflows 64 bits");
    r *= base;
  }
  return r;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw ParameterError("p must be prime (got " + std::to_string(p) + ")");
  if (p > kMaxPrime)
    throw ParameterError("p must be at most " + std::to_string(kMaxPrime));
  fact_.resize(p);
  inv_fact_.resize(p);
  fact_[0] = 1;
  for (std::uint32_t i = 1; i < p; ++i) fact_[i] = mul(fact_[i - 1], i);
  inv_fact_[p - 1] = inv(fact_[p - 1]);
  for (std::uint32_t i = p - 1; i > 0; --i) inv_fact_[i - 1] = mul(inv_fact_[i], i);
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const noexcept {
  std::uint64_t r = 1 % p_, x = a % p_;
  while (e) {
    if (e & 1) r = r * x % p_;
    x = x * x % p_;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  if (a % p_ == 0) throw ParameterError("division by zero in F_p");
  return pow(a, p_ - 2);
}

std::uint32_t PrimeField::small_binom(std::uint32_t a, std::uint32_t b) const noexcept {
  if (b > a) return 0;
  return mul(fact_[a], mul(inv_fact_[b], inv_fact_[a - b]));
}

std::uint32_t PrimeField::binom(std::int64_t a, std::int64_t b) const noexcept {
  if (a < 0 || b < 0 || b > a) return 0;
  std::uint32_t r = 1;
  auto ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
  while (ub > 0 || ua > 0) {
    auto da = static_cast<std::uint32_t>(ua % p_), db = static_cast<std::uint32_t>(ub % p_);
    if (db > da) return 0;
    r = mul(r, small_binom(da, db));
    ua /= p_;
    ub /= p_;
  }
  return r;
}

Params Params::make(std::uint64_t p, std::uint64_t q) {
  if (!is_prime(p)) throw ParameterError("p must be prime (got " + std::to_string(p) + ")");
  if (p > PrimeField::kMaxPrime)
    throw ParameterError("p must be at most " + std::to_string(PrimeField::kMaxPrime));
  if (q < 2) throw ParameterError("q must be a power of p greater than 1");
  std::uint64_t r = q;
  unsigned e = 0;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1)
    throw ParameterError("q must be a power of p (got q=" + std::to_string(q) +
                         ", p=" + std::to_string(p) + ")");
  return Params{static_cast<std::uint32_t>(p), e, q};
}

Params Params::from_exponent(std::uint64_t p, unsigned e) {
  if (e == 0) throw ParameterError("exponent e must be positive");
  return make(p, checked_pow(p, e));
}

FpElem binom_mod_p(std::int64_t a, std::int64_t b, std::uint64_t p) {
  if (!is_prime(p) || p > PrimeField::kMaxPrime)
    throw ParameterError("p must be prime (got " + std::to_string(p) + ")");
  PrimeField field(static_cast<std::uint32_t>(p));
  return {field.binom(a, b), field.p()};
}

bool check_binom_shift(std::int64_t a, std::int64_t b, unsigned m, std::uint64_t p) {
  PrimeField field(static_cast<std::uint32_t>(p));
  auto pm = static_cast<std::int64_t>(checked_pow(p, m));
  return field.binom(a + pm, b) == field.add(field.binom(a, b), field.binom(a, b - pm));
}

}  // namespace glissando
