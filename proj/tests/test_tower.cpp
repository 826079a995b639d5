#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <thread>

#include "cftower/errors.hpp"
#include "cftower/tower.hpp"
#include "oracles.hpp"

using namespace cft;

namespace {

QuadInt oracle_unit(i64 d) {
  const auto u = oracle::pell_oracle(d);
  if (u.den == 2) return QuadInt(d, (u.x - u.y) / 2, u.y);
  if (d % 4 == 1) return QuadInt(d, u.x - u.y, 2 * u.y);
  return QuadInt(d, u.x, u.y);
}

// Roots of p and q mod 32 by exhaustive search over odd residues mod 128.
std::vector<std::array<u64, 2>> brute_roots(u64 p, u64 q) {
  std::set<u64> rp, rq;
  for (u64 s = 1; s < 128; s += 2) {
    if (s * s % 128 == p % 128) rp.insert(s % 32);
    if (s * s % 128 == q % 128) rq.insert(s % 32);
  }
  REQUIRE(rp.size() == 2);
  REQUIRE(rq.size() == 2);
  std::vector<std::array<u64, 2>> out;
  for (u64 a : rp) {
    for (u64 b : rq) out.push_back({a, b});
  }
  return out;
}

unsigned brute_psi(const BiquadElem& x, u64 sp, u64 sq) {
  REQUIRE(4 % x.denominator() == 0);
  const mpz_class scale = 4 / x.denominator();
  const std::array<mpz_class, 4> basis = {1, mpz_class(sp), mpz_class(sq), mpz_class(sp * sq)};
  mpz_class n = 0;
  for (std::size_t k = 0; k < 4; ++k) n += scale * x.numerators()[k] * basis[k];
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), 32);
  REQUIRE(r % 4 == 0);
  return static_cast<unsigned>(r.get_ui() / 4);
}

u64 brute_sqrt(u64 a, u64 p) {
  for (u64 s = 1; s <= p / 2; ++s) {
    if (s * s % p == a % p) return s;
  }
  return 0;
}

// Steps 1-5 written out directly, using library code only for the unit square
// root u (checked by exact squaring) and for real signs.
struct StraightLine {
  std::optional<RejectionStage> rejected;
  std::array<int, 4> quad{};
  BiquadElem w;
};

StraightLine straight_line(u64 p, u64 q, const BiquadElem& u_from_pipeline) {
  StraightLine out;
  if (oracle::legendre_by_table(static_cast<i64>(p), q) != 1) {
    out.rejected = RejectionStage::step2;
    return out;
  }
  const u64 beta = brute_sqrt(p, q);
  const QuadInt e = oracle_unit(static_cast<i64>(p));
  const u64 half = (q + 1) / 2;
  const u64 omega = (1 + beta) % q * half % q;
  const u64 a = mpz_fdiv_ui(e.a().get_mpz_t(), q);
  const u64 b = mpz_fdiv_ui(e.b().get_mpz_t(), q);
  const u64 e_prime = (a + b * omega) % q;
  if (oracle::legendre_by_table(static_cast<i64>(e_prime), q) != -1) {
    out.rejected = RejectionStage::step4;
    return out;
  }

  const auto P = static_cast<i64>(p);
  const auto Q = static_cast<i64>(q);
  const BiquadElem ei = BiquadElem::from_quad(P, Q, e);
  const BiquadElem ej = BiquadElem::from_quad(P, Q, oracle_unit(Q));
  const BiquadElem eij = BiquadElem::from_quad(P, Q, oracle_unit(P * Q));
  BiquadElem target = eij;
  if (total_positivity(eij) != Positivity::totally_positive) {
    const BiquadElem plus = ei * ej * eij;
    target = total_positivity(plus) == Positivity::totally_positive ? plus : -plus;
    REQUIRE(total_positivity(target) == Positivity::totally_positive);
  }
  REQUIRE(u_from_pipeline * u_from_pipeline == target);

  const auto roots = brute_roots(p, q);
  const BiquadElem one = BiquadElem::integer(P, Q, 1);
  int found = 0;
  for (int m = 0; m < 16; ++m) {
    const std::array<int, 4> quad = {m >> 3 & 1, m >> 2 & 1, m >> 1 & 1, m & 1};
    BiquadElem w = quad[0] ? -one : one;
    if (quad[1]) w = w * ei;
    if (quad[2]) w = w * ej;
    if (quad[3]) w = w * u_from_pipeline;
    if (w == one) continue;
    bool ok = true;
    for (const auto& r : roots) {
      const unsigned v = brute_psi(w, r[0], r[1]);
      ok = ok && (v == 1 || v == 5);
    }
    if (ok) {
      ++found;
      out.quad = quad;
      out.w = w;
    }
  }
  REQUIRE(found == 1);
  return out;
}

// The same element written over Q(sqrt q, sqrt p).
BiquadElem swap_roles(const BiquadElem& x) {
  const auto& n = x.numerators();
  return BiquadElem(x.q(), x.p(), {n[0], n[2], n[1], n[3]}, x.denominator());
}

const UsefulPair* find_pair(const ConstructionReport& r, u64 p, u64 q) {
  for (const auto& x : r.S) {
    if (x.p_i == p && x.p_j == q) return &x;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("evaluate_pair preconditions") {
  CHECK_THROWS_AS(evaluate_pair(17, 17), DomainError);
  CHECK_THROWS_AS(evaluate_pair(17, 19), DomainError);
  CHECK_THROWS_AS(evaluate_pair(25, 17), DomainError);
}

TEST_CASE("first step-2 rejection for 17") {
  u64 q0 = 0;
  for (u64 q : sieve_primes_1_mod_8(200).primes) {
    if (q != 17 && oracle::legendre_by_table(17, q) == -1) {
      q0 = q;
      break;
    }
  }
  REQUIRE(q0 != 0);
  const PairOutcome out = evaluate_pair(17, q0);
  REQUIRE(std::holds_alternative<PairRejection>(out));
  CHECK(std::get<PairRejection>(out).stage == RejectionStage::step2);
}

TEST_CASE("first accepted pair at X = 200") {
  const ConstructionReport r = build_S(200);
  REQUIRE_FALSE(r.S.empty());
  const UsefulPair& first = r.S.front();
  const PairOutcome again = evaluate_pair(first.p_i, first.p_j);
  REQUIRE(std::holds_alternative<UsefulPair>(again));
  CHECK(std::get<UsefulPair>(again) == first);
  for (unsigned v : first.psi_values) CHECK((v == 1 || v == 5));
  CHECK(first.quad != std::array<int, 4>{0, 0, 0, 0});
  CHECK(is_integral(first.u));
  const BiquadElem ei = BiquadElem::from_quad(static_cast<i64>(first.p_i), static_cast<i64>(first.p_j), first.e_i.unit);
  const BiquadElem ej = BiquadElem::from_quad(static_cast<i64>(first.p_i), static_cast<i64>(first.p_j), first.e_j.unit);
  CHECK(step5_quadruples(ei, ej, first.u).size() == 1);
  CHECK(step5_quadruples(ei, ej, -first.u).size() == 1);
}

TEST_CASE("pipeline agrees with a straight-line implementation at X = 200") {
  const ConstructionReport r = build_S(200);
  const auto pool = oracle::primes_1_mod_8(200);
  CHECK(r.pool.primes == pool);
  std::size_t accepted = 0;
  for (u64 p : pool) {
    for (u64 q : pool) {
      if (p == q) continue;
      const UsefulPair* pair = find_pair(r, p, q);
      const StraightLine ref = straight_line(p, q, pair ? pair->u : BiquadElem());
      if (ref.rejected) {
        INFO(p, " ", q);
        REQUIRE(pair == nullptr);
        const auto it = std::find_if(r.rejected.begin(), r.rejected.end(),
                                     [&](const PairRejection& x) { return x.p_i == p && x.p_j == q; });
        REQUIRE(it != r.rejected.end());
        REQUIRE(it->stage == *ref.rejected);
        continue;
      }
      REQUIRE(pair != nullptr);
      ++accepted;
      CHECK(pair->quad == ref.quad);
      CHECK(pair->w == ref.w);
      CHECK(pair->beta == brute_sqrt(p, q));
    }
  }
  CHECK(accepted == r.S.size());
  CHECK(r.S.size() + r.rejected.size() == pool.size() * (pool.size() - 1));
}

TEST_CASE("report invariants") {
  const ConstructionReport empty = build_S(16);
  CHECK(empty.S.empty());
  CHECK(empty.ell == 0);
  CHECK(empty.degree_exponent_bound == 0);
  CHECK(empty.root_disc_radicand == 1);
  CHECK(check_growth(empty).r1 == 0.0);
  CHECK(check_growth(empty).r2 == doctest::Approx(0.5 * 16 * std::log(16.0)));
  CHECK_THROWS_AS(build_S(1), DomainError);

  for (u64 x : {100, 200, 400}) {
    const ConstructionReport r = build_S(x);
    INFO("X = ", x);
    CHECK(r.S.size() % 2 == 0);
    CHECK(r.degree_exponent_bound == r.S.size() / 2 + r.ell);
    std::set<u64> primes;
    for (const auto& pair : r.S) {
      primes.insert(pair.p_i);
      primes.insert(pair.p_j);
      CHECK(total_positivity(pair.w) == Positivity::totally_negative);
      const UsefulPair* swapped = find_pair(r, pair.p_j, pair.p_i);
      REQUIRE(swapped != nullptr);
      CHECK(swap_roles(swapped->w) == pair.w);
    }
    CHECK(std::vector<u64>(primes.begin(), primes.end()) == r.U);
    CHECK(r.ell == r.U.size());
    mpz_class radicand = 1;
    for (u64 p : r.U) radicand *= p;
    CHECK(r.root_disc_radicand == radicand);
    CHECK(std::is_sorted(r.S.begin(), r.S.end(), [](const UsefulPair& a, const UsefulPair& b) {
      return std::pair(a.p_i, a.p_j) < std::pair(b.p_i, b.p_j);
    }));
    const GrowthRecord g = check_growth(r);
    CHECK(g == r.growth);
    CHECK(g.r2 >= 0.0);
    CHECK(g.r1 > 0.0);
  }
}

TEST_CASE("tie-break flips, workers and redundancy do not change results") {
  const ConstructionReport base = build_S(200);
  for (int mask = 1; mask < 8; ++mask) {
    PipelineOptions options;
    options.flips.beta = mask & 1;
    options.flips.u_sign = mask & 2;
    options.flips.unit_inverse = mask & 4;
    INFO("flip mask ", mask);
    CHECK(build_S(200, options) == base);
  }
  PipelineOptions parallel;
  parallel.workers = 8;
  CHECK(build_S(200, parallel) == base);
  PipelineOptions single;
  single.redundancy = false;
  CHECK(build_S(200, single) == base);
  single.workers = 3;
  CHECK(build_S(200, single) == base);

  UnitCache cache;
  for (const auto& pair : base.S) {
    for (int mask = 1; mask < 8; ++mask) {
      const TieBreakFlips flips{static_cast<bool>(mask & 1), static_cast<bool>(mask & 2), static_cast<bool>(mask & 4)};
      const PairOutcome out = evaluate_pair(pair.p_i, pair.p_j, cache, flips);
      REQUIRE(std::holds_alternative<UsefulPair>(out));
      REQUIRE(std::get<UsefulPair>(out) == pair);
    }
  }
}

TEST_CASE("unit cache fills each key once under concurrency") {
  UnitCache cache;
  std::vector<const FundamentalUnitRecord*> seen(16, nullptr);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < seen.size(); ++t) {
    threads.emplace_back([&, t] { seen[t] = &cache.get(1513); });
  }
  for (auto& t : threads) t.join();
  for (const auto* r : seen) CHECK(r == seen.front());
  CHECK(seen.front()->unit == fundamental_unit(1513).unit);
}

TEST_CASE("generator manifest") {
  CHECK(emit_generators(build_S(16)) == GeneratorManifest{});
  const ConstructionReport r = build_S(100);
  const GeneratorManifest m = emit_generators(r);
  CHECK(m.radicands == r.U);
  CHECK(m.radicands.size() + m.kummer.size() == r.ell + r.S.size() / 2);
  for (const auto& k : m.kummer) {
    CHECK(k.p < k.q);
    const UsefulPair* pair = find_pair(r, k.p, k.q);
    REQUIRE(pair != nullptr);
    CHECK(pair->w == k.w);
  }
}
