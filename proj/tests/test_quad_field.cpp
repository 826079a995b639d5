#include <doctest.h>

#include <random>

#include "cftower/errors.hpp"
#include "cftower/quad_field.hpp"
#include "oracles.hpp"

using namespace cft;

namespace {

QuadInt random_element(std::mt19937_64& rng, i64 d) {
  auto coord = [&] { return mpz_class(static_cast<long>(rng() % 2001) - 1000); };
  return QuadInt(d, coord(), coord());
}

}  // namespace

TEST_CASE("QuadInt construction and basic arithmetic") {
  CHECK_THROWS_AS(QuadInt(12, 1, 1), DomainError);
  CHECK_THROWS_AS(QuadInt(1, 1, 1), DomainError);
  CHECK_THROWS_AS(QuadInt(7, 1, 1) + QuadInt(13, 1, 1), DomainError);

  const QuadInt eps7(7, 8, -3);
  CHECK(eps7.norm() == 1);
  CHECK(eps7.trace() == 16);
  CHECK(QuadInt(91, 1574, 165).norm() == 1);
  CHECK(QuadInt(13, 1, 1).norm() == -1);
  CHECK(QuadInt(7, 5, 9).trace() == 10);
  CHECK(eps7 * eps7.conjugate() == QuadInt::one(7));
  CHECK(eps7 * eps7.unit_inverse() == QuadInt::one(7));
  CHECK(QuadInt(13, 1, 1) * QuadInt(13, 1, 1).unit_inverse() == QuadInt::one(13));
  CHECK_THROWS_AS(QuadInt(7, 2, 0).unit_inverse(), DomainError);
}

TEST_CASE("QuadInt ring laws") {
  std::mt19937_64 rng(11);
  for (i64 d : {2, 5, 7, 13, 17, 91, 1513}) {
    for (int trial = 0; trial < 200; ++trial) {
      const QuadInt x = random_element(rng, d);
      const QuadInt y = random_element(rng, d);
      const QuadInt z = random_element(rng, d);
      REQUIRE((x * y) * z == x * (y * z));
      REQUIRE(x * (y + z) == x * y + x * z);
      REQUIRE((x * y).conjugate() == x.conjugate() * y.conjugate());
      REQUIRE((x + y).conjugate() == x.conjugate() + y.conjugate());
      REQUIRE(x.conjugate().conjugate() == x);
      REQUIRE((x * y).norm() == x.norm() * y.norm());
      REQUIRE(x - x == QuadInt(d, 0, 0));
      REQUIRE(x + x.conjugate() == QuadInt(d, x.trace(), 0));
    }
  }
}

TEST_CASE("exact sign matches high precision evaluation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const i64 d = 2 + static_cast<i64>(rng() % 500);
    if (!oracle::squarefree(static_cast<u64>(d))) continue;
    const QuadInt x = random_element(rng, d);
    mpz_class a, b, den;
    x.to_sqrt_basis(a, b, den);
    const long double value = a.get_d() + b.get_d() * std::sqrt(static_cast<long double>(d));
    if (std::abs(value) < 1e-6L) continue;
    REQUIRE(x.sign() == (value > 0 ? 1 : -1));
  }
  CHECK(QuadInt(7, 0, 0).sign() == 0);
}

TEST_CASE("fundamental units on small examples") {
  const auto u5 = fundamental_unit(5);
  CHECK(u5.unit == QuadInt(5, 0, 1));
  CHECK(u5.norm == -1);
  const auto u17 = fundamental_unit(17);
  CHECK(u17.unit == QuadInt(17, 3, 2));
  CHECK(u17.norm == -1);
  const auto u13 = fundamental_unit(13);
  CHECK(u13.unit == QuadInt(13, 1, 1));
  CHECK(u13.norm == -1);
  CHECK(fundamental_unit(7).unit == QuadInt(7, 8, 3));
  CHECK(fundamental_unit(91).unit == QuadInt(91, 1574, 165));
  CHECK(fundamental_unit(2).cf_period == 1);
  CHECK_THROWS_AS(fundamental_unit(18), DomainError);
  CHECK_THROWS_AS(fundamental_unit(1), DomainError);
}

TEST_CASE("fundamental units agree with the Pell oracle for squarefree d <= 2000") {
  for (i64 d = 2; d <= 2000; ++d) {
    if (!oracle::squarefree(static_cast<u64>(d))) continue;
    const auto rec = fundamental_unit(d);
    const auto ref = oracle::pell_oracle(d);
    mpz_class x, y, den;
    rec.unit.to_sqrt_basis(x, y, den);
    if (den == 2 && x % 2 == 0 && y % 2 == 0) {
      x /= 2;
      y /= 2;
      den = 1;
    }
    INFO("d = ", d);
    REQUIRE(x == ref.x);
    REQUIRE(y == ref.y);
    REQUIRE(den == ref.den);
    REQUIRE(rec.norm == ref.norm);
    REQUIRE(rec.unit.norm() == rec.norm);
    REQUIRE(rec.unit.sign() == 1);
    REQUIRE(rec.unit.b() > 0);
  }
}

TEST_CASE("primes 1 mod 8 have fundamental units of norm -1") {
  for (u64 p : sieve_primes_1_mod_8(3000).primes) REQUIRE(fundamental_unit(static_cast<i64>(p)).norm == -1);
}

TEST_CASE("normalization to a positive conjugate") {
  const QuadInt eps7(7, 8, -3);
  CHECK(normalize_at_least_one_positive(eps7) == eps7);
  CHECK(normalize_at_least_one_positive(-eps7) == eps7);
  CHECK(normalize_at_least_one_positive(QuadInt(91, 1574, 165)) == QuadInt(91, 1574, 165));
}

TEST_CASE("units modulo a prime") {
  CHECK(unit_mod_prime(QuadInt::one(17), sqrt_mod_p(17, 89), 89) == 1);
  const u64 beta = sqrt_mod_p(17, 89);
  CHECK(unit_mod_prime(QuadInt(17, 0, 1), beta, 89) == mul_mod(1 + beta, inv_mod(2, 89), 89));
  CHECK_THROWS_AS(unit_mod_prime(QuadInt(17, 0, 1), beta + 1, 89), DomainError);
  CHECK_THROWS_AS(unit_mod_prime(QuadInt(17, 0, 1), 1, 2), DomainError);

  // direct evaluation of (3 + 2 omega) in Z/89 for both square roots
  const QuadInt e17 = fundamental_unit(17).unit;
  for (u64 b : {beta, 89 - beta}) {
    const u64 expected = (3 + 2 * ((1 + b) * 45 % 89)) % 89;  // 45 = 1/2 mod 89
    CHECK(unit_mod_prime(e17, b, 89) == expected);
  }
}

TEST_CASE("step 4 decision does not depend on the sign of beta") {
  const auto pool = sieve_primes_1_mod_8(1500).primes;
  for (u64 p : pool) {
    const QuadInt e = fundamental_unit(static_cast<i64>(p)).unit;
    for (u64 r : pool) {
      if (r == p || legendre_symbol(static_cast<i64>(p), r) != 1) continue;
      const u64 b = sqrt_mod_p(static_cast<i64>(p), r);
      REQUIRE(legendre_symbol(static_cast<i64>(unit_mod_prime(e, b, r)), r) ==
              legendre_symbol(static_cast<i64>(unit_mod_prime(e, r - b, r)), r));
    }
  }
}
