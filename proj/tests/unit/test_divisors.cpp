#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "glissando/divisors.hpp"
#include "glissando/errors.hpp"
#include "glissando/umatrix.hpp"
#include "oracle.hpp"

using namespace glissando;

namespace {

std::vector<DivisorValue> from_oracle(const std::vector<std::optional<std::int64_t>>& v) {
  std::vector<DivisorValue> out;
  for (const auto& x : v) out.push_back(x ? DivisorValue::finite(*x) : DivisorValue::infinite());
  return out;
}

// Exact Smith exponents: precision beyond every minor's degree.
std::vector<DivisorValue> exact_divisors(const PolyMatrix& m) {
  return elementary_divisors(m, exact_divisor_precision(m)).values;
}

PolyMatrix permuted(const PolyMatrix& m, const std::vector<std::size_t>& rp, const std::vector<std::size_t>& cp) {
  PolyMatrix out(m.rows(), m.cols(), m.p());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(rp[i], cp[j]);
  return out;
}

// Random upper unitriangular times a unit diagonal: invertible over F_p[[t]].
PolyMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, std::uint32_t p) {
  PolyMatrix u = oracle::random_matrix(rng, n, n, p, 3, 0.3);
  std::uniform_int_distribution<std::uint32_t> unit(1, p - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) u(i, j) = FpPoly(p);
  for (std::size_t i = 0; i < n; ++i) {
    FpPoly d = u(i, i).shifted(1);  // keep higher terms, make the constant a unit
    d += FpPoly::constant(p, unit(rng));
    u(i, i) = d;
  }
  return u;
}

// Everything known only to be >= n reads as the floor n.
std::vector<DivisorValue> capped(std::vector<DivisorValue> v, std::size_t n) {
  for (auto& x : v)
    if (x.at_least(static_cast<std::int64_t>(n))) x = DivisorValue::floor(static_cast<std::int64_t>(n));
  return v;
}

}  // namespace

TEST_SUITE("divisors") {

TEST_CASE("diagonal and zero matrices") {
  PolyMatrix d(3, 3, 2);
  d(0, 0) = FpPoly::one(2);
  d(1, 1) = FpPoly::monomial(2, 1, 1);
  d(2, 2) = FpPoly::monomial(2, 1, 2);
  CHECK(exact_divisors(d) ==
        std::vector<DivisorValue>{DivisorValue::finite(0), DivisorValue::finite(1), DivisorValue::finite(2)});
  CHECK(exact_divisors(PolyMatrix(3, 3, 5)) == std::vector<DivisorValue>(3, DivisorValue::infinite()));
}

TEST_CASE("formatting") {
  CHECK(DivisorValue::finite(3).to_string() == "3");
  CHECK(DivisorValue::floor(12).to_string() == ">=12");
  CHECK(DivisorValue::infinite().to_string() == "inf");
}

TEST_CASE("floors appear below the precision") {
  PolyMatrix d(2, 2, 3);
  d(0, 0) = FpPoly::one(3);
  d(1, 1) = FpPoly::monomial(3, 1, 9);
  const DivisorList low = elementary_divisors(d, 4);
  CHECK(low.values[0] == DivisorValue::finite(0));
  CHECK(low.values[1] == DivisorValue::floor(4));
  CHECK(exact_divisors(d)[1] == DivisorValue::finite(9));
  CHECK_THROWS_AS(elementary_divisors(d, 0), ParameterError);
}

TEST_CASE("U^(6) against the minor oracle") {
  const UMatrix u = build_u_matrix(Params::make(2, 2), 6);
  const auto values = exact_divisors(u.entries);
  CHECK(values == from_oracle(oracle::divisors_from_minors(u.entries)));
  CHECK(values.front() == DivisorValue::finite(0));
  for (std::size_t l = 1; l <= values.size(); ++l) CHECK(values[l - 1].at_least(static_cast<std::int64_t>(l) - 1));
}

TEST_CASE("U^(k) against the minor oracle for dim <= 8") {
  for (auto [p, q] : {std::pair{2u, 2ull}, {2u, 4ull}, {3u, 3ull}, {3u, 9ull}})
    for (int k = 2; k <= 9; ++k) {
      const UMatrix u = build_u_matrix(Params::make(p, q), k);
      REQUIRE(exact_divisors(u.entries) == from_oracle(oracle::divisors_from_minors(u.entries)));
    }
}

TEST_CASE("random matrices against the minor oracle") {
  std::mt19937_64 rng(31415);
  for (int trial = 0; trial < 150; ++trial) {
    const std::uint32_t p = trial % 3 == 0 ? 3 : 2;
    const std::size_t r = 1 + trial % 6, c = 1 + (trial / 6) % 6;
    const PolyMatrix m = trial % 2 ? oracle::random_glissando(rng, r, c, p, 0.4)
                                   : oracle::random_matrix(rng, r, c, p, 4, 0.4);
    REQUIRE(exact_divisors(m) == from_oracle(oracle::divisors_from_minors(m)));
  }
}

TEST_CASE("divisor bound on U^(k)") {
  for (auto [p, q] : {std::pair{2u, 2ull}, {2u, 4ull}, {3u, 3ull}, {3u, 9ull}})
    for (int k = 2; k <= 40; ++k) REQUIRE(check_divisor_bound(build_u_matrix(Params::make(p, q), k).entries));
}

TEST_CASE("divisor bound on random glissando matrices") {
  std::mt19937_64 rng(161803);
  std::uniform_int_distribution<std::size_t> dim(1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t p = trial % 2 ? 3 : 2;
    const std::size_t r = dim(rng), c = dim(rng);
    const PolyMatrix g = oracle::random_glissando(rng, r, c, p);
    REQUIRE(check_divisor_bound(g));
    if (r <= 6 && c <= 6) REQUIRE(exact_divisors(g) == from_oracle(oracle::divisors_from_minors(g)));
  }
}

TEST_CASE("single column") {
  PolyMatrix col(4, 1, 2);
  col(2, 0) = FpPoly::one(2);
  CHECK(check_divisor_bound(col));
  CHECK(exact_divisors(col) == std::vector<DivisorValue>{DivisorValue::finite(0)});
}

TEST_CASE("non-glissando input is rejected by the bound check") {
  PolyMatrix m(2, 2, 2);
  m(0, 0) = FpPoly::monomial(2, 1, 1);
  CHECK_THROWS_AS(check_divisor_bound(m), ParameterError);
}

TEST_CASE("invariance under permutations and unimodular transforms") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t p = trial % 2 ? 3 : 2;
    const std::size_t n = 2 + trial % 6;
    const PolyMatrix m = oracle::random_glissando(rng, n, n, p, 0.3);
    const std::size_t precision = 4 * n + 8;
    const auto base = capped(elementary_divisors(m, precision).values, precision);

    std::vector<std::size_t> rp(n), cp(n);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    REQUIRE(capped(elementary_divisors(permuted(m, rp, cp), precision).values, precision) == base);

    const PolyMatrix left = random_unimodular(rng, n, p), right = random_unimodular(rng, n, p);
    REQUIRE(capped(elementary_divisors((left * m * right).truncated(precision), precision).values, precision) == base);
  }
}

TEST_CASE("input is not modified") {
  const UMatrix u = build_u_matrix(Params::make(3, 3), 10);
  const PolyMatrix copy = u.entries;
  (void)elementary_divisors(u.entries, 20);
  CHECK(u.entries == copy);
}

}
