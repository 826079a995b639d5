#include "cftower/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cftower/errors.hpp"

namespace cft {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 inv_mod(u64 a, u64 m) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    i64 q = r / new_r;
    std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
    std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
  }
  if (r != 1) throw DomainError("inv_mod: arguments not coprime");
  if (t < 0) t += static_cast<i64>(m);
  return static_cast<u64>(t);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 w : kWitnesses) {
    if (n % w == 0) return n == w;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 w : kWitnesses) {
    u64 x = pow_mod(w, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_squarefree(u64 n) {
  if (n == 0) return false;
  for (u64 f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      n /= f;
      if (n % f == 0) return false;
    }
  }
  return true;
}

std::vector<u64> sieve_primes(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

PrimePool sieve_primes_1_mod_8(u64 budget) {
  if (budget < 2) throw DomainError("sieve_primes_1_mod_8: budget must be >= 2");
  PrimePool pool{budget, {}};
  for (u64 p : sieve_primes(budget)) {
    if (p % 8 == 1) pool.primes.push_back(p);
  }
  return pool;
}

namespace {

void require_odd_prime(u64 p, const char* who) {
  if (p % 2 == 0 || !is_prime(p)) {
    throw DomainError(std::string(who) + ": modulus " + std::to_string(p) + " is not an odd prime");
  }
}

u64 reduce(const mpz_class& a, u64 p) { return mpz_fdiv_ui(a.get_mpz_t(), p); }

u64 reduce(i64 a, u64 p) {
  i64 r = a % static_cast<i64>(p);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(p) : r);
}

int legendre_reduced(u64 a, u64 p) {
  if (a == 0) return 0;
  return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// Tonelli-Shanks on a reduced nonzero residue.
u64 tonelli_shanks(u64 a, u64 p) {
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (legendre_reduced(z, p) != -1) ++z;
  u64 m = s;
  u64 c = pow_mod(z, q, p);
  u64 t = pow_mod(a, q, p);
  u64 r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0;
    u64 t2 = t;
    while (t2 != 1) {
      t2 = mul_mod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < m - i; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return r;
}

u64 sqrt_reduced(u64 a, u64 p) {
  if (legendre_reduced(a, p) != 1) {
    throw DomainError("sqrt_mod_p: " + std::to_string(a) + " is not a quadratic residue mod " +
                      std::to_string(p));
  }
  u64 s = tonelli_shanks(a, p);
  return std::min(s, p - s);
}

}  // namespace

int legendre_symbol(const mpz_class& a, u64 p) {
  require_odd_prime(p, "legendre_symbol");
  return legendre_reduced(reduce(a, p), p);
}

int legendre_symbol(i64 a, u64 p) {
  require_odd_prime(p, "legendre_symbol");
  return legendre_reduced(reduce(a, p), p);
}

u64 sqrt_mod_p(const mpz_class& a, u64 p) {
  require_odd_prime(p, "sqrt_mod_p");
  return sqrt_reduced(reduce(a, p), p);
}

u64 sqrt_mod_p(i64 a, u64 p) {
  require_odd_prime(p, "sqrt_mod_p");
  return sqrt_reduced(reduce(a, p), p);
}

TwoAdicRoot two_adic_sqrt(const mpz_class& a, unsigned k) {
  if (k < 3 || k > 60) throw DomainError("two_adic_sqrt: precision exponent must lie in [3, 60]");
  if (mpz_fdiv_ui(a.get_mpz_t(), 8) != 1) throw DomainError("two_adic_sqrt: radicand must be 1 mod 8");

  const unsigned work = k + 2;
  const u64 mask = (u64{1} << work) - 1;
  mpz_class reduced;
  mpz_fdiv_r_2exp(reduced.get_mpz_t(), a.get_mpz_t(), work);
  const u64 a_mod = reduced.get_ui();

  // x = 1 solves x^2 = a (mod 8); each pass extends the solution by one bit.
  u64 x = 1;
  for (unsigned i = 3; i < work; ++i) {
    const u64 m = (u64{1} << (i + 1)) - 1;
    if (((x * x) & m) != (a_mod & m)) x += u64{1} << (i - 1);
  }
  if (((x * x) & mask) != a_mod) throw InvariantViolation("two_adic_sqrt: lifting failed");

  const u64 mod_k = u64{1} << k;
  u64 s = x & (mod_k - 1);
  if (s % 4 != 1) s = mod_k - s;
  return TwoAdicRoot{a, k, s};
}

double log_integral(double x) {
  if (!(x >= 2.0)) throw DomainError("log_integral: x must be >= 2");
  if (x == 2.0) return 0.0;
  // Substituting t = e^v smooths the integrand for large x.
  auto integrand = [](double v) { return std::exp(v) / v; };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, std::log(2.0),
                                                                       std::log(x), 30, 1e-13, &error);
}

}  // namespace cft
