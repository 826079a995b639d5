#pragma once

// Exact arithmetic in the maximal order of a real quadratic field Q(sqrt d)
// and fundamental units by continued fractions.

#include <string>

#include <gmpxx.h>

#include "cftower/arith.hpp"

namespace cft {

/// a + b*omega in the maximal order of Q(sqrt d), where omega = (1 + sqrt d)/2
/// when d = 1 (mod 4) and omega = sqrt d otherwise.
class QuadInt {
 public:
  QuadInt() = default;
  /// Throws DomainError unless d >= 2 is squarefree.
  QuadInt(i64 d, mpz_class a, mpz_class b);

  static QuadInt one(i64 d) { return QuadInt(d, 1, 0); }

  i64 d() const { return d_; }
  const mpz_class& a() const { return a_; }
  const mpz_class& b() const { return b_; }
  bool half_integral_basis() const { return d_ % 4 == 1; }

  /// Coordinates in the basis {1, sqrt d} as (x + y sqrt d) / den, den in {1, 2}.
  void to_sqrt_basis(mpz_class& x, mpz_class& y, mpz_class& den) const;

  mpz_class norm() const;
  mpz_class trace() const;
  QuadInt conjugate() const;

  /// Sign at the real embedding sending sqrt d to the positive root.
  int sign() const;

  QuadInt operator-() const { return QuadInt(d_, -a_, -b_, Unchecked{}); }
  friend QuadInt operator+(const QuadInt& x, const QuadInt& y);
  friend QuadInt operator-(const QuadInt& x, const QuadInt& y);
  friend QuadInt operator*(const QuadInt& x, const QuadInt& y);
  bool operator==(const QuadInt& other) const {
    return d_ == other.d_ && a_ == other.a_ && b_ == other.b_;
  }

  /// Inverse of a unit (norm +-1); throws DomainError otherwise.
  QuadInt unit_inverse() const;

  std::string to_string() const;

 private:
  struct Unchecked {};
  QuadInt(i64 d, mpz_class a, mpz_class b, Unchecked)
      : d_(d), a_(std::move(a)), b_(std::move(b)) {}

  i64 d_ = 0;
  mpz_class a_;
  mpz_class b_;
};

struct FundamentalUnitRecord {
  i64 d = 0;
  QuadInt unit;       // > 1 at the canonical embedding
  int norm = 0;       // +1 or -1
  unsigned cf_period = 0;

  bool operator==(const FundamentalUnitRecord&) const = default;
};

/// Runs the PQa continued-fraction recurrence on omega_d through one period.
/// Throws DomainError when d is not squarefree or d < 2.
FundamentalUnitRecord fundamental_unit(i64 d);

/// e or -e, whichever is positive at the canonical embedding.
QuadInt normalize_at_least_one_positive(const QuadInt& e);

/// Image of e under O -> Z/r sending sqrt d to beta. Requires beta^2 = d (mod r),
/// r an odd prime; throws DomainError otherwise.
u64 unit_mod_prime(const QuadInt& e, u64 beta, u64 r);

}  // namespace cft
