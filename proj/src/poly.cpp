#include "glissando/poly.hpp"

#include <algorithm>
#include <sstream>

#include "glissando/errors.hpp"
#include "glissando/field.hpp"

namespace glissando {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

void require_same_field(const FpPoly& f, const FpPoly& g) {
  if (f.p() != g.p())
    throw ParameterError("polynomials over different prime fields (p=" + std::to_string(f.p()) +
                         " vs p=" + std::to_string(g.p()) + ")");
}

constexpr std::size_t kKaratsubaThreshold = 48;

// out[0..n) += (a * b)[0..n) with delayed reduction; out is a u64 accumulator.
// Residues are < 2^16, so each product is < 2^32 and the accumulator cannot
// overflow before 2^32 additions.
void schoolbook(const u32* a, std::size_t na, const u32* b, std::size_t nb, u64* out,
                std::size_t n) {
  for (std::size_t i = 0; i < na && i < n; ++i) {
    const u64 ai = a[i];
    if (ai == 0) continue;
    const std::size_t lim = std::min(nb, n - i);
    u64* o = out + i;
    for (std::size_t j = 0; j < lim; ++j) o[j] += ai * b[j];
  }
}

void reduce_into(const std::vector<u64>& acc, std::vector<u32>& dst, u32 p) {
  dst.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) dst[i] = static_cast<u32>(acc[i] % p);
}

// Full product of equal-length blocks via Karatsuba, result reduced mod p.
void karatsuba(const u32* a, const u32* b, std::size_t n, u32 p, u32* out) {
  if (n <= kKaratsubaThreshold) {
    std::vector<u64> acc(2 * n - 1, 0);
    schoolbook(a, n, b, n, acc.data(), acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<u32>(acc[i] % p);
    return;
  }
  const std::size_t lo = n / 2, hi = n - lo;
  std::vector<u32> z0(2 * lo - 1), z2(2 * hi - 1), z1(2 * hi - 1);
  karatsuba(a, b, lo, p, z0.data());
  karatsuba(a + lo, b + lo, hi, p, z2.data());
  std::vector<u32> sa(hi), sb(hi);
  for (std::size_t i = 0; i < hi; ++i) {
    u32 x = a[lo + i] + (i < lo ? a[i] : 0);
    u32 y = b[lo + i] + (i < lo ? b[i] : 0);
    sa[i] = x >= p ? x - p : x;
    sb[i] = y >= p ? y - p : y;
  }
  karatsuba(sa.data(), sb.data(), hi, p, z1.data());
  for (std::size_t i = 0; i < z1.size(); ++i) {
    u64 v = z1[i] + 2ull * p;
    v -= (i < z0.size() ? z0[i] : 0);
    v -= z2[i];
    z1[i] = static_cast<u32>(v % p);
  }
  std::fill(out, out + 2 * n - 1, 0u);
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] = z0[i];
  for (std::size_t i = 0; i < z2.size(); ++i) out[2 * lo + i] = z2[i];
  for (std::size_t i = 0; i < z1.size(); ++i) {
    u32 v = out[lo + i] + z1[i];
    out[lo + i] = v >= p ? v - p : v;
  }
}

std::vector<u32> multiply(const std::vector<u32>& a, const std::vector<u32>& b, u32 p,
                          std::size_t n) {
  if (a.empty() || b.empty() || n == 0) return {};
  const std::size_t full = a.size() + b.size() - 1;
  const std::size_t len = std::min(full, n);
  const std::size_t small = std::min(a.size(), b.size());
  if (small <= kKaratsubaThreshold || len < full) {
    std::vector<u64> acc(len, 0);
    if (a.size() <= b.size())
      schoolbook(a.data(), a.size(), b.data(), b.size(), acc.data(), len);
    else
      schoolbook(b.data(), b.size(), a.data(), a.size(), acc.data(), len);
    std::vector<u32> r;
    reduce_into(acc, r, p);
    return r;
  }
  // Split the longer operand into chunks of the shorter one's length.
  const std::vector<u32>& s = a.size() <= b.size() ? a : b;
  const std::vector<u32>& l = a.size() <= b.size() ? b : a;
  const std::size_t m = s.size();
  std::vector<u32> r(full, 0), chunk(m), prod(2 * m - 1);
  for (std::size_t off = 0; off < l.size(); off += m) {
    std::size_t cnt = std::min(m, l.size() - off);
    std::fill(chunk.begin(), chunk.end(), 0u);
    std::copy(l.begin() + off, l.begin() + off + cnt, chunk.begin());
    karatsuba(s.data(), chunk.data(), m, p, prod.data());
    for (std::size_t i = 0; i < prod.size() && off + i < full; ++i) {
      u32 v = r[off + i] + prod[i];
      r[off + i] = v >= p ? v - p : v;
    }
  }
  return r;
}

}  // namespace

std::int64_t Valuation::value() const {
  if (is_infinite()) throw ParameterError("valuation is +infinity");
  return value_;
}

std::string Valuation::to_string() const {
  return is_infinite() ? std::string("inf") : std::to_string(value_);
}

FpPoly::FpPoly(std::uint32_t p, std::vector<std::uint32_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& c : c_) c %= p_;
  normalize();
}

FpPoly::FpPoly(std::uint32_t p, std::initializer_list<std::int64_t> coeffs) : p_(p) {
  c_.reserve(coeffs.size());
  for (std::int64_t c : coeffs) {
    std::int64_t r = c % static_cast<std::int64_t>(p);
    c_.push_back(static_cast<u32>(r < 0 ? r + p : r));
  }
  normalize();
}

FpPoly FpPoly::monomial(std::uint32_t p, std::uint32_t c, std::size_t degree) {
  FpPoly f(p);
  if (c % p == 0) return f;
  f.c_.assign(degree + 1, 0);
  f.c_[degree] = c % p;
  return f;
}

void FpPoly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Valuation FpPoly::valuation() const noexcept {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return Valuation(static_cast<std::int64_t>(i));
  return Valuation::infinity();
}

std::size_t FpPoly::term_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](u32 c) { return c != 0; }));
}

bool FpPoly::is_monomial() const noexcept { return term_count() == 1; }

FpPoly FpPoly::truncated(std::size_t n) const {
  FpPoly r(p_);
  if (n >= c_.size()) {
    r.c_ = c_;
    return r;
  }
  r.c_.assign(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n));
  r.normalize();
  return r;
}

FpPoly FpPoly::shifted(std::size_t s) const {
  FpPoly r(p_);
  if (c_.empty()) return r;
  r.c_.assign(s, 0);
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

FpPoly FpPoly::scaled(std::uint32_t c) const {
  c %= p_;
  FpPoly r(p_);
  if (c == 0) return r;
  r.c_ = c_;
  for (auto& x : r.c_) x = static_cast<u32>(static_cast<u64>(x) * c % p_);
  return r;
}

FpPoly FpPoly::operator-() const {
  FpPoly r(*this);
  for (auto& x : r.c_) x = x == 0 ? 0 : p_ - x;
  return r;
}

FpPoly& FpPoly::operator+=(const FpPoly& g) {
  require_same_field(*this, g);
  if (c_.size() < g.c_.size()) c_.resize(g.c_.size(), 0);
  for (std::size_t i = 0; i < g.c_.size(); ++i) {
    u32 s = c_[i] + g.c_[i];
    c_[i] = s >= p_ ? s - p_ : s;
  }
  normalize();
  return *this;
}

FpPoly& FpPoly::operator-=(const FpPoly& g) {
  require_same_field(*this, g);
  if (c_.size() < g.c_.size()) c_.resize(g.c_.size(), 0);
  for (std::size_t i = 0; i < g.c_.size(); ++i)
    c_[i] = c_[i] >= g.c_[i] ? c_[i] - g.c_[i] : c_[i] + p_ - g.c_[i];
  normalize();
  return *this;
}

FpPoly operator*(const FpPoly& f, const FpPoly& g) { return mul_trunc(f, g, kExact); }

FpPoly mul_trunc(const FpPoly& f, const FpPoly& g, std::size_t n) {
  require_same_field(f, g);
  FpPoly r(f.p());
  r.c_ = multiply(f.c_, g.c_, f.p(), n);
  r.normalize();
  return r;
}

FpPoly mul_mod(const FpPoly& f, const FpPoly& g, std::size_t n) { return mul_trunc(f, g, n); }

std::pair<FpPoly, FpPoly> divmod(const FpPoly& f, const FpPoly& g) {
  require_same_field(f, g);
  if (g.is_zero()) throw ParameterError("polynomial division by zero");
  PrimeField field(f.p());
  const u32 lead_inv = field.inv(g.coeffs().back());
  std::vector<u32> rem = f.coeffs();
  const std::size_t dg = g.coeffs().size() - 1;
  std::vector<u32> quo(rem.size() > dg ? rem.size() - dg : 0, 0);
  for (std::size_t i = rem.size(); i-- > dg;) {
    u32 c = field.mul(rem[i], lead_inv);
    if (c == 0) continue;
    quo[i - dg] = c;
    for (std::size_t j = 0; j <= dg; ++j)
      rem[i - dg + j] = field.sub(rem[i - dg + j], field.mul(c, g.coeffs()[j]));
  }
  return {FpPoly(f.p(), std::move(quo)), FpPoly(f.p(), std::move(rem))};
}

std::string FpPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << c_[i];
      continue;
    }
    if (c_[i] != 1) os << c_[i] << '*';
    os << 't';
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

std::string SeriesValuation::to_string() const {
  return exact ? std::to_string(value) : ">=" + std::to_string(value);
}

TruncatedSeries::TruncatedSeries(const FpPoly& value, std::size_t precision)
    : value_(value.truncated(precision)), precision_(precision) {
  if (precision == 0) throw ParameterError("series precision must be at least 1");
}

SeriesValuation TruncatedSeries::valuation() const noexcept {
  Valuation v = value_.valuation();
  if (v.is_infinite()) return {static_cast<std::int64_t>(precision_), false};
  return {v.value(), true};
}

TruncatedSeries TruncatedSeries::inverse() const {
  if (!is_unit())
    throw PrecisionError("series is not a unit at precision " + std::to_string(precision_),
                         precision_);
  PrimeField field(p());
  const auto& a = value_.coeffs();
  const u32 a0inv = field.inv(a[0]);
  std::vector<u32> b(precision_, 0);
  b[0] = a0inv;
  for (std::size_t k = 1; k < precision_; ++k) {
    u64 acc = 0;
    const std::size_t lim = std::min(k, a.size() - 1);
    for (std::size_t i = 1; i <= lim; ++i) acc += static_cast<u64>(a[i]) * b[k - i];
    b[k] = field.neg(field.mul(static_cast<u32>(acc % p()), a0inv));
  }
  return {FpPoly(p(), std::move(b)), precision_};
}

TruncatedSeries TruncatedSeries::divided_by_t_power(std::size_t v) const {
  SeriesValuation val = valuation();
  if (static_cast<std::int64_t>(v) > val.value || v >= precision_)
    throw PrecisionError("cannot divide by t^" + std::to_string(v) + " at precision " +
                             std::to_string(precision_),
                         precision_ + v);
  std::vector<u32> c;
  if (value_.coeffs().size() > v) c.assign(value_.coeffs().begin() + static_cast<std::ptrdiff_t>(v), value_.coeffs().end());
  return {FpPoly(p(), std::move(c)), precision_ - v};
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  return {a.value_ + b.value_, std::min(a.precision_, b.precision_)};
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  return {a.value_ - b.value_, std::min(a.precision_, b.precision_)};
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  // a = x + O(t^Na), b = y + O(t^Nb): ab = xy + O(t^min(Na + v(b), Nb + v(a))).
  const auto va = static_cast<std::size_t>(a.valuation().value);
  const auto vb = static_cast<std::size_t>(b.valuation().value);
  const std::size_t n = std::min(a.precision_ + vb, b.precision_ + va);
  return {mul_trunc(a.value_, b.value_, n), n};
}

}  // namespace glissando
