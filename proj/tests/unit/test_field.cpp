#include <doctest.h>

#include <random>

#include "glissando/errors.hpp"
#include "glissando/field.hpp"
#include "oracle.hpp"

using namespace glissando;

TEST_SUITE("field") {

TEST_CASE("primality and powers") {
  CHECK(is_prime(2));
  CHECK(is_prime(65521));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(4));
  CHECK(checked_pow(3, 4) == 81);
  CHECK_THROWS(checked_pow(2, 64));
}

TEST_CASE("binomials at small arguments") {
  CHECK(binom_mod_p(0, 0, 2).value == 1);
  CHECK(binom_mod_p(2, 1, 2).value == 0);
  CHECK(binom_mod_p(7, 3, 2).value == 1);
  CHECK(binom_mod_p(7, 3, 5).value == 0);  // 35
  CHECK(binom_mod_p(7, 3, 3).value == 2);  // 35 = 11*3 + 2
  for (std::uint64_t p : {2, 3, 5, 7})
    for (std::int64_t a : {0, 1, 9, 100}) {
      CHECK(binom_mod_p(a, -1, p).value == 0);
      CHECK(binom_mod_p(a, a + 1, p).value == 0);
    }
  CHECK(binom_mod_p(-3, 1, 2).value == 0);
}

TEST_CASE("non-prime modulus is rejected") {
  CHECK_THROWS_AS(binom_mod_p(3, 1, 4), ParameterError);
  CHECK_THROWS_AS(PrimeField(9), ParameterError);
  CHECK_THROWS_AS(PrimeField(65537), ParameterError);
}

TEST_CASE("Lucas agrees with Pascal's triangle") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    PrimeField f(p);
    for (std::int64_t a = 0; a < 160; ++a)
      for (std::int64_t b = -2; b <= a + 2; ++b) REQUIRE(f.binom(a, b) == oracle::binom_pascal(a, b, p));
  }
}

TEST_CASE("symmetry C(a,b) = C(a,a-b)") {
  PrimeField f(3);
  for (std::int64_t a = 0; a < 500; ++a)
    for (std::int64_t b = 0; b <= a; b += 7) CHECK(f.binom(a, b) == f.binom(a, a - b));
}

TEST_CASE("shift identity examples") {
  CHECK(check_binom_shift(3, 2, 1, 2));
  CHECK(check_binom_shift(0, 0, 1, 3));
}

TEST_CASE("shift identity fuzz") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::int64_t> arg(0, 10000);
  std::uniform_int_distribution<unsigned> mexp(0, 5);
  for (std::uint64_t p : {2, 3, 5}) {
    for (int trial = 0; trial < 2000; ++trial) {
      const std::int64_t a = arg(rng), b = arg(rng);
      const unsigned m = mexp(rng);
      REQUIRE(check_binom_shift(a, b, m, p));
    }
  }
  // Shift identity against the oracle directly on small arguments.
  for (std::uint32_t p : {2u, 3u}) {
    for (unsigned m = 0; m <= 3; ++m) {
      const auto pm = static_cast<std::int64_t>(checked_pow(p, m));
      for (std::int64_t a = 0; a < 60; ++a)
        for (std::int64_t b = 0; b < 70; ++b)
          REQUIRE(oracle::binom_pascal(a + pm, b, p) ==
                  (oracle::binom_pascal(a, b, p) + oracle::binom_pascal(a, b - pm, p)) % p);
    }
  }
}

TEST_CASE("field element arithmetic") {
  PrimeField f(7);
  CHECK(f.reduce(-1) == 6);
  CHECK(f.mul(3, 5) == 1);
  CHECK(f.inv(3) == 5);
  CHECK(f.pow(3, 6) == 1);
  CHECK_THROWS(f.inv(0));
}

TEST_CASE("parameters") {
  const Params a = Params::make(2, 4);
  CHECK(a.e == 2);
  CHECK(Params::from_exponent(3, 2).q == 9);
  CHECK_THROWS_AS(Params::make(2, 6), ParameterError);
  CHECK_THROWS_AS(Params::make(4, 4), ParameterError);
  CHECK_THROWS_AS(Params::make(3, 1), ParameterError);
}

}
