#pragma once

// Modular arithmetic kernel: sieving, residue symbols, square roots modulo
// odd primes and powers of two, and the logarithmic integral.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace cft {

using u64 = std::uint64_t;
using i64 = std::int64_t;
__extension__ using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m);

/// Inverse of a modulo m; a and m must be coprime.
u64 inv_mod(u64 a, u64 m);

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(u64 n);

bool is_squarefree(u64 n);

/// Integer square root, floor(sqrt(n)).
u64 isqrt(u64 n);

/// All primes <= limit (Eratosthenes).
std::vector<u64> sieve_primes(u64 limit);

struct PrimePool {
  u64 budget = 0;
  std::vector<u64> primes;  // p = 1 (mod 8), p <= budget, increasing

  bool operator==(const PrimePool&) const = default;
};

PrimePool sieve_primes_1_mod_8(u64 budget);

/// Legendre symbol (a / p) for an odd prime p. Throws DomainError when p is
/// even or composite.
int legendre_symbol(const mpz_class& a, u64 p);
int legendre_symbol(i64 a, u64 p);

/// Square root of a modulo an odd prime p, returning min(s, p - s).
/// Throws DomainError when a is not a nonzero quadratic residue.
u64 sqrt_mod_p(const mpz_class& a, u64 p);
u64 sqrt_mod_p(i64 a, u64 p);

struct TwoAdicRoot {
  mpz_class radicand;
  unsigned precision_exponent = 0;  // k: root is a residue mod 2^k
  u64 root = 0;                     // odd, root = 1 (mod 4)

  u64 modulus() const { return u64{1} << precision_exponent; }
};

/// Square root of a = 1 (mod 8) in Z_2, reduced mod 2^k. The root is solved
/// modulo 2^(k+2) and then reduced, so it agrees with a genuine 2-adic root
/// to k bits. Of the two reductions {s, 2^k - s} the one = 1 (mod 4) is
/// returned. Supports 3 <= k <= 60.
TwoAdicRoot two_adic_sqrt(const mpz_class& a, unsigned k);

/// Li(x) = integral from 2 to x of dt / log t, relative error <= 1e-9.
double log_integral(double x);

}  // namespace cft
