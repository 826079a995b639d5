#include "cftower/quad_field.hpp"

#include "cftower/errors.hpp"

namespace cft {

namespace {

void require_same_field(const QuadInt& x, const QuadInt& y) {
  if (x.d() != y.d()) {
    throw DomainError("QuadInt: mismatched fields d=" + std::to_string(x.d()) + " and d=" +
                      std::to_string(y.d()));
  }
}

// Sign of x + y*sqrt(d) for d > 0 non-square.
int sign_of_surd(const mpz_class& x, const mpz_class& y, i64 d) {
  const int sx = sgn(x);
  const int sy = sgn(y);
  if (sx >= 0 && sy >= 0) return (sx == 0 && sy == 0) ? 0 : 1;
  if (sx <= 0 && sy <= 0) return -1;
  const mpz_class diff = x * x - y * y * d;
  return sx > 0 ? sgn(diff) : -sgn(diff);
}

}  // namespace

QuadInt::QuadInt(i64 d, mpz_class a, mpz_class b) : d_(d), a_(std::move(a)), b_(std::move(b)) {
  if (d < 2 || !is_squarefree(static_cast<u64>(d))) {
    throw DomainError("QuadInt: d=" + std::to_string(d) + " is not a squarefree integer >= 2");
  }
}

void QuadInt::to_sqrt_basis(mpz_class& x, mpz_class& y, mpz_class& den) const {
  if (half_integral_basis()) {
    x = 2 * a_ + b_;
    y = b_;
    den = 2;
  } else {
    x = a_;
    y = b_;
    den = 1;
  }
}

mpz_class QuadInt::norm() const {
  if (half_integral_basis()) return a_ * a_ + a_ * b_ - b_ * b_ * ((d_ - 1) / 4);
  return a_ * a_ - b_ * b_ * d_;
}

mpz_class QuadInt::trace() const {
  if (half_integral_basis()) return 2 * a_ + b_;
  return 2 * a_;
}

QuadInt QuadInt::conjugate() const {
  if (half_integral_basis()) return QuadInt(d_, a_ + b_, -b_, Unchecked{});
  return QuadInt(d_, a_, -b_, Unchecked{});
}

int QuadInt::sign() const {
  mpz_class x, y, den;
  to_sqrt_basis(x, y, den);
  return sign_of_surd(x, y, d_);
}

QuadInt operator+(const QuadInt& x, const QuadInt& y) {
  require_same_field(x, y);
  return QuadInt(x.d_, x.a_ + y.a_, x.b_ + y.b_, QuadInt::Unchecked{});
}

QuadInt operator-(const QuadInt& x, const QuadInt& y) {
  require_same_field(x, y);
  return QuadInt(x.d_, x.a_ - y.a_, x.b_ - y.b_, QuadInt::Unchecked{});
}

QuadInt operator*(const QuadInt& x, const QuadInt& y) {
  require_same_field(x, y);
  const mpz_class ac = x.a_ * y.a_;
  const mpz_class bd = x.b_ * y.b_;
  const mpz_class cross = x.a_ * y.b_ + x.b_ * y.a_;
  if (x.half_integral_basis()) {
    // omega^2 = omega + (d - 1)/4
    return QuadInt(x.d_, ac + bd * ((x.d_ - 1) / 4), cross + bd, QuadInt::Unchecked{});
  }
  return QuadInt(x.d_, ac + bd * x.d_, cross, QuadInt::Unchecked{});
}

QuadInt QuadInt::unit_inverse() const {
  const mpz_class n = norm();
  if (n == 1) return conjugate();
  if (n == -1) return -conjugate();
  throw DomainError("QuadInt::unit_inverse: element is not a unit");
}

std::string QuadInt::to_string() const {
  const std::string basis = half_integral_basis() ? "(1+sqrt(" + std::to_string(d_) + "))/2"
                                                  : "sqrt(" + std::to_string(d_) + ")";
  return a_.get_str() + " + " + b_.get_str() + "*" + basis;
}

FundamentalUnitRecord fundamental_unit(i64 d) {
  if (d < 2 || !is_squarefree(static_cast<u64>(d))) {
    throw DomainError("fundamental_unit: d=" + std::to_string(d) + " is not a squarefree integer >= 2");
  }
  // xi_0 = (P_0 + sqrt d) / Q_0 = omega_d. The convergent A_k/B_k yields a
  // unit exactly when Q_{k+1} returns to Q_0; its norm is (-1)^(k+1).
  const bool half = d % 4 == 1;
  const i64 p0 = half ? 1 : 0;
  const i64 q0 = half ? 2 : 1;
  const i64 root = static_cast<i64>(isqrt(static_cast<u64>(d)));

  i64 p = p0;
  i64 q = q0;
  mpz_class a_prev2 = 0, a_prev1 = 1;
  mpz_class b_prev2 = 1, b_prev1 = 0;
  for (unsigned k = 0;; ++k) {
    const i64 partial = (p + root) / q;
    mpz_class a_k = a_prev1 * partial + a_prev2;
    mpz_class b_k = b_prev1 * partial + b_prev2;
    const i64 p_next = partial * q - p;
    const i64 q_next = (d - p_next * p_next) / q;
    if (q_next == q0) {
      const int norm = (k % 2 == 0) ? -1 : 1;
      QuadInt unit = half ? QuadInt(d, a_k - b_k, b_k) : QuadInt(d, a_k, b_k);
      if (unit.norm() != norm) {
        throw InvariantViolation("fundamental_unit: norm mismatch for d=" + std::to_string(d));
      }
      return FundamentalUnitRecord{d, std::move(unit), norm, k + 1};
    }
    p = p_next;
    q = q_next;
    a_prev2 = std::move(a_prev1);
    a_prev1 = std::move(a_k);
    b_prev2 = std::move(b_prev1);
    b_prev1 = std::move(b_k);
  }
}

QuadInt normalize_at_least_one_positive(const QuadInt& e) { return e.sign() < 0 ? -e : e; }

u64 unit_mod_prime(const QuadInt& e, u64 beta, u64 r) {
  if (r % 2 == 0 || !is_prime(r)) throw DomainError("unit_mod_prime: modulus must be an odd prime");
  const u64 d_mod = static_cast<u64>(e.d() % static_cast<i64>(r));
  beta %= r;
  if (mul_mod(beta, beta, r) != d_mod) {
    throw DomainError("unit_mod_prime: beta^2 != d (mod " + std::to_string(r) + ")");
  }
  const u64 a = mpz_fdiv_ui(e.a().get_mpz_t(), r);
  const u64 b = mpz_fdiv_ui(e.b().get_mpz_t(), r);
  const u64 omega = e.half_integral_basis() ? mul_mod((1 + beta) % r, inv_mod(2, r), r) : beta;
  return (a + mul_mod(b, omega, r)) % r;
}

}  // namespace cft
