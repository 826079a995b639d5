#include "cftower/biquad_field.hpp"

#include <algorithm>
#include <numeric>

#include "cftower/errors.hpp"

namespace cft {

// ---------------------------------------------------------------------------
// RealInterval

RealInterval::RealInterval(mpfr_prec_t precision) {
  mpfr_init2(lo_, precision);
  mpfr_init2(hi_, precision);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

RealInterval::RealInterval(const RealInterval& other) {
  mpfr_init2(lo_, other.precision());
  mpfr_init2(hi_, other.precision());
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

RealInterval::RealInterval(RealInterval&& other) noexcept {
  mpfr_init2(lo_, MPFR_PREC_MIN);
  mpfr_init2(hi_, MPFR_PREC_MIN);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

RealInterval& RealInterval::operator=(RealInterval other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

RealInterval::~RealInterval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

int RealInterval::certain_sign() const {
  if (mpfr_sgn(lo_) > 0) return 1;
  if (mpfr_sgn(hi_) < 0) return -1;
  return 0;
}

double RealInterval::midpoint() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

// ---------------------------------------------------------------------------
// BiquadElem

namespace {

void require_field(i64 p, i64 q) {
  if (p < 2 || q < 2 || p == q || !is_squarefree(static_cast<u64>(p)) ||
      !is_squarefree(static_cast<u64>(q))) {
    throw DomainError("BiquadElem: (" + std::to_string(p) + ", " + std::to_string(q) +
                      ") are not distinct squarefree integers >= 2");
  }
}

void require_same_field(const BiquadElem& x, const BiquadElem& y) {
  if (x.p() != y.p() || x.q() != y.q()) throw DomainError("BiquadElem: mismatched fields");
}

}  // namespace

BiquadElem::BiquadElem(i64 p, i64 q, std::array<mpz_class, 4> numerators, mpz_class denominator)
    : p_(p), q_(q), num_(std::move(numerators)), den_(std::move(denominator)) {
  require_field(p, q);
  if (den_ == 0) throw DomainError("BiquadElem: zero denominator");
  normalize();
}

BiquadElem BiquadElem::integer(i64 p, i64 q, const mpz_class& value) {
  return BiquadElem(p, q, {value, 0, 0, 0});
}

BiquadElem BiquadElem::from_quad(i64 p, i64 q, const QuadInt& e) {
  mpz_class x, y, den;
  e.to_sqrt_basis(x, y, den);
  if (e.d() == p) return BiquadElem(p, q, {x, y, 0, 0}, den);
  if (e.d() == q) return BiquadElem(p, q, {x, 0, y, 0}, den);
  if (e.d() == p * q && std::gcd(p, q) == 1) return BiquadElem(p, q, {x, 0, 0, y}, den);
  throw DomainError("BiquadElem::from_quad: Q(sqrt " + std::to_string(e.d()) +
                    ") is not a subfield handled for (" + std::to_string(p) + ", " + std::to_string(q) +
                    ")");
}

void BiquadElem::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& n : num_) n = -n;
  }
  mpz_class g = den_;
  for (const auto& n : num_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  if (g != 1) {
    for (auto& n : num_) mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
}

mpq_class BiquadElem::coordinate(int k) const {
  mpq_class c(num_.at(static_cast<std::size_t>(k)), den_);
  c.canonicalize();
  return c;
}

bool BiquadElem::is_zero() const {
  return std::all_of(num_.begin(), num_.end(), [](const mpz_class& n) { return n == 0; });
}

std::size_t BiquadElem::max_bits() const {
  std::size_t bits = mpz_sizeinbase(den_.get_mpz_t(), 2);
  for (const auto& n : num_) bits = std::max(bits, mpz_sizeinbase(n.get_mpz_t(), 2));
  return bits;
}

BiquadElem BiquadElem::galois(int sp, int sq) const {
  BiquadElem r = *this;
  if (sp < 0) r.num_[1] = -r.num_[1];
  if (sq < 0) r.num_[2] = -r.num_[2];
  if (sp * sq < 0) r.num_[3] = -r.num_[3];
  return r;
}

mpq_class BiquadElem::norm() const {
  const BiquadElem n = *this * galois(1, -1) * galois(-1, 1) * galois(-1, -1);
  if (!n.is_rational()) throw InvariantViolation("BiquadElem::norm: product of conjugates not rational");
  return n.coordinate(0);
}

mpq_class BiquadElem::trace() const {
  mpq_class t(4 * num_[0], den_);
  t.canonicalize();
  return t;
}

BiquadElem BiquadElem::inverse() const {
  if (is_zero()) throw DomainError("BiquadElem::inverse: zero element");
  const BiquadElem others = galois(1, -1) * galois(-1, 1) * galois(-1, -1);
  const BiquadElem n = *this * others;
  if (!n.is_rational()) throw InvariantViolation("BiquadElem::inverse: product of conjugates not rational");
  // others / (n0 / nden) = others * nden / n0
  BiquadElem r = others;
  for (auto& c : r.num_) c *= n.den_;
  r.den_ *= n.num_[0];
  r.normalize();
  return r;
}

BiquadElem BiquadElem::operator-() const {
  BiquadElem r = *this;
  for (auto& n : r.num_) n = -n;
  return r;
}

BiquadElem operator+(const BiquadElem& x, const BiquadElem& y) {
  require_same_field(x, y);
  BiquadElem r = x;
  if (x.den_ == y.den_) {
    for (std::size_t k = 0; k < 4; ++k) r.num_[k] += y.num_[k];
  } else {
    for (std::size_t k = 0; k < 4; ++k) r.num_[k] = x.num_[k] * y.den_ + y.num_[k] * x.den_;
    r.den_ = x.den_ * y.den_;
  }
  r.normalize();
  return r;
}

BiquadElem operator-(const BiquadElem& x, const BiquadElem& y) { return x + (-y); }

BiquadElem operator*(const BiquadElem& x, const BiquadElem& y) {
  require_same_field(x, y);
  const i64 p = x.p_;
  const i64 q = x.q_;
  const auto& a = x.num_;
  const auto& b = y.num_;
  BiquadElem r;
  r.p_ = p;
  r.q_ = q;
  const mpz_class pq = mpz_class(p) * q;
  r.num_[0] = a[0] * b[0] + p * (a[1] * b[1]) + q * (a[2] * b[2]) + pq * (a[3] * b[3]);
  r.num_[1] = a[0] * b[1] + a[1] * b[0] + q * (a[2] * b[3] + a[3] * b[2]);
  r.num_[2] = a[0] * b[2] + a[2] * b[0] + p * (a[1] * b[3] + a[3] * b[1]);
  r.num_[3] = a[0] * b[3] + a[3] * b[0] + a[1] * b[2] + a[2] * b[1];
  r.den_ = x.den_ * y.den_;
  r.normalize();
  return r;
}

bool BiquadElem::operator==(const BiquadElem& other) const {
  return p_ == other.p_ && q_ == other.q_ && den_ == other.den_ && num_ == other.num_;
}

std::string BiquadElem::to_string() const {
  const std::string sp = std::to_string(p_);
  const std::string sq = std::to_string(q_);
  std::string s = "(" + num_[0].get_str() + " + " + num_[1].get_str() + "*sqrt(" + sp + ") + " +
                  num_[2].get_str() + "*sqrt(" + sq + ") + " + num_[3].get_str() + "*sqrt(" + sp + "*" +
                  sq + "))";
  if (den_ != 1) s += "/" + den_.get_str();
  return s;
}

BiquadElem pow(const BiquadElem& base, unsigned exponent) {
  BiquadElem result = BiquadElem::integer(base.p(), base.q(), 1);
  BiquadElem factor = base;
  while (exponent > 0) {
    if (exponent & 1U) result = result * factor;
    exponent >>= 1U;
    if (exponent > 0) factor = factor * factor;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Embeddings

namespace {

// acc += c * sqrt(m), outward rounded.
void add_surd_term(RealInterval& acc, const mpz_class& c, u64 m) {
  const mpfr_prec_t prec = acc.precision();
  if (c == 0) return;
  mpfr_t root_lo, root_hi, term_lo, term_hi;
  mpfr_inits2(prec, root_lo, root_hi, term_lo, term_hi, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_ui(root_lo, static_cast<unsigned long>(m), MPFR_RNDD);
  mpfr_set_ui(root_hi, static_cast<unsigned long>(m), MPFR_RNDU);
  mpfr_sqrt(root_lo, root_lo, MPFR_RNDD);
  mpfr_sqrt(root_hi, root_hi, MPFR_RNDU);
  if (c > 0) {
    mpfr_mul_z(term_lo, root_lo, c.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(term_hi, root_hi, c.get_mpz_t(), MPFR_RNDU);
  } else {
    mpfr_mul_z(term_lo, root_hi, c.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(term_hi, root_lo, c.get_mpz_t(), MPFR_RNDU);
  }
  mpfr_add(acc.lo(), acc.lo(), term_lo, MPFR_RNDD);
  mpfr_add(acc.hi(), acc.hi(), term_hi, MPFR_RNDU);
  mpfr_clears(root_lo, root_hi, term_lo, term_hi, static_cast<mpfr_ptr>(nullptr));
}

}  // namespace

RealInterval embed(const BiquadElem& e, std::pair<int, int> signs, mpfr_prec_t precision) {
  if (precision < 64) throw DomainError("embed: precision must be >= 64 bits");
  RealInterval acc(precision);
  const auto& n = e.numerators();
  mpfr_set_z(acc.lo(), n[0].get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(acc.hi(), n[0].get_mpz_t(), MPFR_RNDU);
  const auto [sp, sq] = signs;
  add_surd_term(acc, sp * n[1], static_cast<u64>(e.p()));
  add_surd_term(acc, sq * n[2], static_cast<u64>(e.q()));
  add_surd_term(acc, sp * sq * n[3], static_cast<u64>(e.p()) * static_cast<u64>(e.q()));
  if (e.denominator() != 1) {
    mpfr_div_z(acc.lo(), acc.lo(), e.denominator().get_mpz_t(), MPFR_RNDD);
    mpfr_div_z(acc.hi(), acc.hi(), e.denominator().get_mpz_t(), MPFR_RNDU);
  }
  return acc;
}

std::array<int, 4> embedding_signs(const BiquadElem& e) {
  if (e.is_zero()) throw DomainError("embedding_signs: zero element");
  mpfr_prec_t precision = static_cast<mpfr_prec_t>(std::max<std::size_t>(64, e.max_bits() + 64));
  constexpr mpfr_prec_t kMaxPrecision = mpfr_prec_t{1} << 24;
  while (precision <= kMaxPrecision) {
    std::array<int, 4> signs{};
    bool certain = true;
    for (std::size_t k = 0; k < 4 && certain; ++k) {
      signs[k] = embed(e, kEmbeddingSigns[k], precision).certain_sign();
      certain = signs[k] != 0;
    }
    if (certain) return signs;
    precision *= 2;
  }
  throw InvariantViolation("embedding_signs: precision exhausted");
}

Positivity total_positivity(const BiquadElem& e) {
  const auto signs = embedding_signs(e);
  if (std::all_of(signs.begin(), signs.end(), [](int s) { return s > 0; })) {
    return Positivity::totally_positive;
  }
  if (std::all_of(signs.begin(), signs.end(), [](int s) { return s < 0; })) {
    return Positivity::totally_negative;
  }
  return Positivity::mixed;
}

std::string to_string(Positivity positivity) {
  switch (positivity) {
    case Positivity::totally_positive:
      return "totally_positive";
    case Positivity::totally_negative:
      return "totally_negative";
    case Positivity::mixed:
      return "mixed";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Integrality

namespace {

// r + s sqrt(p) with rational r, s.
struct QuadRat {
  mpq_class r;
  mpq_class s;
};

QuadRat mul(const QuadRat& x, const QuadRat& y, i64 p) {
  return {x.r * y.r + p * (x.s * y.s), x.r * y.s + x.s * y.r};
}

bool is_integer(const mpq_class& x) { return x.get_den() == 1; }

bool discriminants_coprime(i64 p, i64 q) {
  if (std::gcd(p, q) != 1) return false;
  return p % 4 == 1 || q % 4 == 1;
}

// When disc(Q(sqrt p)) and disc(Q(sqrt q)) are coprime, O_L has basis
// {1, w_p, w_q, w_p w_q}. Solve for coordinates in that basis.
bool integral_in_tensor_basis(const BiquadElem& e) {
  auto parts = [](i64 d) {
    // omega_d = alpha + beta sqrt d
    return d % 4 == 1 ? std::pair{mpq_class(1, 2), mpq_class(1, 2)} : std::pair{mpq_class(0), mpq_class(1)};
  };
  const auto [ap, bp] = parts(e.p());
  const auto [aq, bq] = parts(e.q());
  const mpq_class x0 = e.coordinate(0), x1 = e.coordinate(1), x2 = e.coordinate(2), x3 = e.coordinate(3);
  const mpq_class c3 = x3 / (bp * bq);
  const mpq_class c2 = x2 / bq - c3 * ap;
  const mpq_class c1 = x1 / bp - c3 * aq;
  const mpq_class c0 = x0 - c1 * ap - c2 * aq - c3 * ap * aq;
  return is_integer(c0) && is_integer(c1) && is_integer(c2) && is_integer(c3);
}

}  // namespace

std::array<mpq_class, 4> characteristic_polynomial(const BiquadElem& e) {
  const i64 p = e.p();
  const i64 q = e.q();
  const QuadRat a{e.coordinate(0), e.coordinate(1)};
  const QuadRat b{e.coordinate(2), e.coordinate(3)};
  // Relative polynomial over Q(sqrt p): X^2 - t X + n.
  const QuadRat t{2 * a.r, 2 * a.s};
  const QuadRat a2 = mul(a, a, p);
  const QuadRat b2 = mul(b, b, p);
  const QuadRat n{a2.r - q * b2.r, a2.s - q * b2.s};
  const mpq_class c3 = -2 * t.r;
  const mpq_class c2 = (t.r * t.r - p * t.s * t.s) + 2 * n.r;
  const mpq_class c1 = -2 * (t.r * n.r - p * t.s * n.s);
  const mpq_class c0 = n.r * n.r - p * n.s * n.s;
  return {c0, c1, c2, c3};
}

bool is_integral(const BiquadElem& e) {
  if (e.denominator() == 1) return true;
  if (discriminants_coprime(e.p(), e.q())) return integral_in_tensor_basis(e);
  const auto coeffs = characteristic_polynomial(e);
  return std::all_of(coeffs.begin(), coeffs.end(), is_integer);
}

// ---------------------------------------------------------------------------
// Square roots

namespace {

// Recovery at one working precision. w has integer coordinates and is
// totally positive. Coordinates of the root are rounded to the 1/4 lattice.
std::optional<BiquadElem> recover_root(const BiquadElem& w, mpfr_prec_t prec) {
  std::array<mpfr_t, 4> roots;
  for (std::size_t k = 0; k < 4; ++k) {
    mpfr_init2(roots[k], prec);
    RealInterval enclosure = embed(w, kEmbeddingSigns[k], prec);
    mpfr_sqrt(roots[k], enclosure.lo(), MPFR_RNDN);
  }
  mpfr_t sum, term, scale, rounding_error;
  mpfr_inits2(prec, sum, term, scale, rounding_error, static_cast<mpfr_ptr>(nullptr));
  const std::array<u64, 4> radicands = {1, static_cast<u64>(w.p()), static_cast<u64>(w.q()),
                                        static_cast<u64>(w.p()) * static_cast<u64>(w.q())};

  std::optional<BiquadElem> found;
  for (unsigned pattern = 0; pattern < 8 && !found; ++pattern) {
    const std::array<int, 4> root_sign = {1, (pattern & 1U) ? -1 : 1, (pattern & 2U) ? -1 : 1,
                                          (pattern & 4U) ? -1 : 1};
    std::array<mpz_class, 4> coords;
    bool plausible = true;
    for (std::size_t c = 0; c < 4 && plausible; ++c) {
      mpfr_set_zero(sum, 1);
      for (std::size_t k = 0; k < 4; ++k) {
        const auto [sp, sq] = kEmbeddingSigns[k];
        int character = 1;
        if (c == 1) character = sp;
        if (c == 2) character = sq;
        if (c == 3) character = sp * sq;
        if (character * root_sign[k] > 0) {
          mpfr_add(sum, sum, roots[k], MPFR_RNDN);
        } else {
          mpfr_sub(sum, sum, roots[k], MPFR_RNDN);
        }
      }
      // sum = 4 x_c sqrt(radicand_c); coordinates are stored as 4 x_c.
      if (radicands[c] != 1) {
        mpfr_set_ui(scale, static_cast<unsigned long>(radicands[c]), MPFR_RNDN);
        mpfr_sqrt(scale, scale, MPFR_RNDN);
        mpfr_div(sum, sum, scale, MPFR_RNDN);
      }
      mpfr_round(term, sum);
      mpfr_sub(rounding_error, sum, term, MPFR_RNDN);
      if (mpfr_cmp_d(rounding_error, 0.25) > 0 || mpfr_cmp_d(rounding_error, -0.25) < 0) {
        plausible = false;
        break;
      }
      mpfr_get_z(coords[c].get_mpz_t(), term, MPFR_RNDN);
    }
    if (!plausible) continue;
    BiquadElem candidate(w.p(), w.q(), coords, 4);
    if (candidate * candidate == w) found = std::move(candidate);
  }

  mpfr_clears(sum, term, scale, rounding_error, static_cast<mpfr_ptr>(nullptr));
  for (auto& r : roots) mpfr_clear(r);
  return found;
}

}  // namespace

std::optional<BiquadElem> exact_square_root(const BiquadElem& w) {
  if (w.is_zero()) return w;
  const auto signs = embedding_signs(w);
  if (std::any_of(signs.begin(), signs.end(), [](int s) { return s < 0; })) return std::nullopt;

  // w * den^2 has integer coordinates, so its root (if any) is integral.
  const mpz_class& den = w.denominator();
  std::array<mpz_class, 4> scaled = w.numerators();
  for (auto& c : scaled) c *= den;
  const BiquadElem integral_w(w.p(), w.q(), scaled, 1);

  auto precision = static_cast<mpfr_prec_t>(2 * integral_w.max_bits() + 128);
  for (int attempt = 0; attempt <= 8; ++attempt, precision *= 2) {
    if (auto root = recover_root(integral_w, precision)) {
      BiquadElem r = *root * BiquadElem(w.p(), w.q(), {1, 0, 0, 0}, den);
      if (r * r != w) throw InvariantViolation("exact_square_root: rescaled root failed verification");
      return r;
    }
  }
  return std::nullopt;
}

std::pair<std::optional<int>, BiquadElem> unit_square_target(i64 p, i64 q, const QuadInt& e_i,
                                                             const QuadInt& e_j, const QuadInt& e_ij) {
  const BiquadElem big_ij = BiquadElem::from_quad(p, q, e_ij);
  if (total_positivity(big_ij) == Positivity::totally_positive) return {std::nullopt, big_ij};
  const BiquadElem product = BiquadElem::from_quad(p, q, e_i) * BiquadElem::from_quad(p, q, e_j) * big_ij;
  switch (total_positivity(product)) {
    case Positivity::totally_positive:
      return {1, product};
    case Positivity::totally_negative:
      return {-1, -product};
    case Positivity::mixed:
      break;
  }
  throw InvariantViolation("unit_square_root: no sign s makes s*e_i*e_j*e_ij totally positive");
}

UnitSquareRoot unit_square_root(i64 p, i64 q, const QuadInt& e_i, const QuadInt& e_j,
                                const QuadInt& e_ij) {
  if (e_i.norm() != -1 || e_j.norm() != -1) {
    throw DomainError("unit_square_root: e_i and e_j must have norm -1");
  }
  auto [s, target] = unit_square_target(p, q, e_i, e_j, e_ij);
  auto root = exact_square_root(target);
  if (!root || !is_integral(*root)) {
    throw InvariantViolation("unit_square_root: no integral square root found at maximum precision for (" +
                             std::to_string(p) + ", " + std::to_string(q) + ")");
  }
  return UnitSquareRoot{s, std::move(target), std::move(*root)};
}

// ---------------------------------------------------------------------------
// Reductions at 2

unsigned PsiHom::operator()(const BiquadElem& e) const {
  constexpr u64 kMod = 32;
  const mpz_class& den = e.denominator();
  const auto twos = static_cast<unsigned>(mpz_scan1(den.get_mpz_t(), 0));
  if (twos > 2) throw DomainError("element not integral at 2");
  mpz_class odd_part;
  mpz_fdiv_q_2exp(odd_part.get_mpz_t(), den.get_mpz_t(), twos);
  const u64 odd_inverse = inv_mod(mpz_fdiv_ui(odd_part.get_mpz_t(), kMod), kMod);
  const u64 scale = u64{4} >> twos;
  const std::array<u64, 4> images = {1, s_p % kMod, s_q % kMod, (s_p * s_q) % kMod};
  u64 n = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const u64 coeff = mpz_fdiv_ui(e.numerators()[k].get_mpz_t(), kMod);
    n = (n + coeff * scale % kMod * images[k]) % kMod;
  }
  n = n * odd_inverse % kMod;
  if (n % 4 != 0) throw DomainError("element not integral at 2");
  return static_cast<unsigned>((n / 4) % 8);
}

std::array<PsiHom, 4> psi_homs(i64 p, i64 q) {
  if (p % 8 != 1 || q % 8 != 1) throw DomainError("psi_homs: p and q must be 1 mod 8");
  const u64 sp = two_adic_sqrt(mpz_class(p), 5).root;
  const u64 sq = two_adic_sqrt(mpz_class(q), 5).root;
  return {PsiHom{p, q, sp, sq}, PsiHom{p, q, sp, 32 - sq}, PsiHom{p, q, 32 - sp, sq},
          PsiHom{p, q, 32 - sp, 32 - sq}};
}

// ---------------------------------------------------------------------------
// Squareness

SquareCertificate is_square_in_field(const BiquadElem& e, unsigned witnesses) {
  if (e.is_zero()) throw DomainError("is_square_in_field: zero element");
  const auto signs = embedding_signs(e);
  for (std::size_t k = 0; k < 4; ++k) {
    if (signs[k] < 0) {
      return {SquareVerdict::nonsquare_witnessed, std::nullopt,
              "negative at real embedding (" + std::to_string(kEmbeddingSigns[k].first) + "," +
                  std::to_string(kEmbeddingSigns[k].second) + ")"};
    }
  }

  const auto p = static_cast<u64>(e.p());
  const auto q = static_cast<u64>(e.q());
  unsigned tried = 0;
  for (u64 ell = 3; tried < witnesses; ell += 2) {
    if (!is_prime(ell) || p % ell == 0 || q % ell == 0) continue;
    if (mpz_fdiv_ui(e.denominator().get_mpz_t(), ell) == 0) continue;
    if (legendre_symbol(static_cast<i64>(p), ell) != 1 || legendre_symbol(static_cast<i64>(q), ell) != 1) {
      continue;
    }
    const u64 rp = sqrt_mod_p(static_cast<i64>(p), ell);
    const u64 rq = sqrt_mod_p(static_cast<i64>(q), ell);
    const u64 den_inv = inv_mod(mpz_fdiv_ui(e.denominator().get_mpz_t(), ell), ell);
    std::array<u64, 4> coeff{};
    for (std::size_t k = 0; k < 4; ++k) coeff[k] = mpz_fdiv_ui(e.numerators()[k].get_mpz_t(), ell);
    bool usable = true;
    for (const auto& [sp, sq] : kEmbeddingSigns) {
      const u64 xp = sp > 0 ? rp : ell - rp;
      const u64 xq = sq > 0 ? rq : ell - rq;
      u64 value = (coeff[0] + mul_mod(coeff[1], xp, ell) + mul_mod(coeff[2], xq, ell) +
                   mul_mod(coeff[3], mul_mod(xp, xq, ell), ell)) %
                  ell;
      value = mul_mod(value, den_inv, ell);
      if (value == 0) {
        usable = false;
        continue;
      }
      if (legendre_symbol(static_cast<i64>(value), ell) == -1) {
        return {SquareVerdict::nonsquare_witnessed, std::nullopt,
                "quadratic nonresidue modulo a prime over " + std::to_string(ell) + " (sqrt p -> " +
                    std::to_string(xp) + ", sqrt q -> " + std::to_string(xq) + ")"};
      }
    }
    if (usable) ++tried;
  }

  if (auto root = exact_square_root(e)) {
    return {SquareVerdict::square_certified, std::move(root), "exact square root verified"};
  }
  throw InvariantViolation("is_square_in_field: inconclusive after " + std::to_string(witnesses) +
                           " split primes");
}

}  // namespace cft
