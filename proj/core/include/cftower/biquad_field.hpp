#pragma once

// Exact arithmetic in biquadratic fields Q(sqrt p, sqrt q): certified real
// embeddings, integrality, unit square roots, the reductions O_L -> Z/8 at the
// split prime 2, and squareness certificates.

#include <array>
#include <optional>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "cftower/arith.hpp"
#include "cftower/quad_field.hpp"

namespace cft {

/// Closed interval [lo, hi] with MPFR endpoints rounded outward.
class RealInterval {
 public:
  explicit RealInterval(mpfr_prec_t precision);
  RealInterval(const RealInterval& other);
  RealInterval(RealInterval&& other) noexcept;
  RealInterval& operator=(RealInterval other) noexcept;
  ~RealInterval();

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  mpfr_ptr lo() { return lo_; }
  mpfr_ptr hi() { return hi_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  /// +1 / -1 when the interval excludes zero, 0 otherwise.
  int certain_sign() const;
  bool contains(double x) const { return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0; }
  double midpoint() const;

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

/// (n0 + n1 sqrt p + n2 sqrt q + n3 sqrt(pq)) / den with den > 0 and
/// gcd(n0, n1, n2, n3, den) = 1.
class BiquadElem {
 public:
  BiquadElem() = default;
  /// Throws DomainError unless p != q are squarefree integers >= 2.
  BiquadElem(i64 p, i64 q, std::array<mpz_class, 4> numerators, mpz_class denominator = 1);

  static BiquadElem integer(i64 p, i64 q, const mpz_class& value);
  /// Embeds a + b*omega_d for d in {p, q, p*q/gcd^2}; the pq-part uses sqrt p * sqrt q
  /// and requires gcd(p, q) = 1 when d = p*q.
  static BiquadElem from_quad(i64 p, i64 q, const QuadInt& e);

  i64 p() const { return p_; }
  i64 q() const { return q_; }
  const std::array<mpz_class, 4>& numerators() const { return num_; }
  const mpz_class& denominator() const { return den_; }
  mpq_class coordinate(int k) const;

  bool is_zero() const;
  bool is_rational() const { return num_[1] == 0 && num_[2] == 0 && num_[3] == 0; }
  /// Largest bit length among the numerators and the denominator.
  std::size_t max_bits() const;

  /// Galois conjugate sending sqrt p -> sp sqrt p and sqrt q -> sq sqrt q.
  BiquadElem galois(int sp, int sq) const;
  /// Product of the four conjugates, a rational number.
  mpq_class norm() const;
  mpq_class trace() const;
  BiquadElem inverse() const;

  BiquadElem operator-() const;
  friend BiquadElem operator+(const BiquadElem& x, const BiquadElem& y);
  friend BiquadElem operator-(const BiquadElem& x, const BiquadElem& y);
  friend BiquadElem operator*(const BiquadElem& x, const BiquadElem& y);
  friend BiquadElem operator/(const BiquadElem& x, const BiquadElem& y) { return x * y.inverse(); }
  bool operator==(const BiquadElem& other) const;

  std::string to_string() const;

 private:
  void normalize();

  i64 p_ = 0;
  i64 q_ = 0;
  std::array<mpz_class, 4> num_;
  mpz_class den_ = 1;
};

BiquadElem pow(const BiquadElem& base, unsigned exponent);

/// Certified enclosure of the real embedding sqrt p -> sp sqrt p, sqrt q -> sq sqrt q.
/// precision is in bits and must be >= 64.
RealInterval embed(const BiquadElem& e, std::pair<int, int> signs, mpfr_prec_t precision);

/// The four sign patterns in the fixed order (+,+), (+,-), (-,+), (-,-).
inline constexpr std::array<std::pair<int, int>, 4> kEmbeddingSigns = {
    std::pair{1, 1}, std::pair{1, -1}, std::pair{-1, 1}, std::pair{-1, -1}};

/// Coefficients (c0, c1, c2, c3) of X^4 + c3 X^3 + c2 X^2 + c1 X + c0, the
/// characteristic polynomial of e over Q.
std::array<mpq_class, 4> characteristic_polynomial(const BiquadElem& e);

/// True iff e lies in the ring of integers of Q(sqrt p, sqrt q). Uses the
/// integral basis {1, w_p, w_q, w_p w_q} when the quadratic discriminants are
/// coprime and the characteristic polynomial otherwise.
bool is_integral(const BiquadElem& e);

enum class Positivity { totally_positive, totally_negative, mixed };
std::string to_string(Positivity positivity);

/// Signs of all four embeddings, escalating precision until every enclosure
/// excludes zero. Throws DomainError for e = 0.
std::array<int, 4> embedding_signs(const BiquadElem& e);
Positivity total_positivity(const BiquadElem& e);

/// Exact square root of w in L, if one exists; the root is positive at (+,+).
/// Numerical recovery followed by exact verification; precision starts at
/// 2 * w.max_bits() + 128 bits and doubles up to 8 times. std::nullopt means
/// no root was certified.
std::optional<BiquadElem> exact_square_root(const BiquadElem& w);

struct UnitSquareRoot {
  std::optional<int> s;  // absent when e_ij is totally positive
  BiquadElem target;     // w0 with u^2 = w0
  BiquadElem u;
};

/// The totally positive unit whose square root step 5 needs: e_ij itself when
/// it is totally positive, otherwise s e_i e_j e_ij with s chosen to make the
/// product totally positive. Throws InvariantViolation if no such s exists.
std::pair<std::optional<int>, BiquadElem> unit_square_target(i64 p, i64 q, const QuadInt& e_i,
                                                             const QuadInt& e_j, const QuadInt& e_ij);

/// Square root u in O_L of e_ij (if totally positive) or of s e_i e_j e_ij.
/// Throws InvariantViolation when no integral root can be certified.
UnitSquareRoot unit_square_root(i64 p, i64 q, const QuadInt& e_i, const QuadInt& e_j,
                                const QuadInt& e_ij);

/// Reduction O_L -> Z/8 sending sqrt p -> s_p and sqrt q -> s_q, where s_p and
/// s_q are 2-adic square roots known mod 32.
struct PsiHom {
  i64 p = 0;
  i64 q = 0;
  u64 s_p = 0;
  u64 s_q = 0;

  /// Throws DomainError("element not integral at 2") when e has a 2-adic
  /// denominator beyond the integral lattice.
  unsigned operator()(const BiquadElem& e) const;
  bool operator==(const PsiHom&) const = default;
};

/// The four homomorphisms O_L -> Z/8 for p = q = 1 (mod 8), ordered by the
/// sign choices (+s_p,+s_q), (+s_p,-s_q), (-s_p,+s_q), (-s_p,-s_q).
std::array<PsiHom, 4> psi_homs(i64 p, i64 q);

enum class SquareVerdict { square_certified, nonsquare_witnessed };

struct SquareCertificate {
  SquareVerdict verdict = SquareVerdict::nonsquare_witnessed;
  std::optional<BiquadElem> root;  // set for square_certified
  std::string witness;             // human-readable nonsquare witness
};

/// Squareness in L. Throws DomainError for e = 0 and InvariantViolation with
/// "inconclusive" when neither certificate can be produced.
SquareCertificate is_square_in_field(const BiquadElem& e, unsigned witnesses = 20);

}  // namespace cft
