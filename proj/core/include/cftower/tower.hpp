#pragma once

// The pair pipeline: for every ordered pair of primes p = 1 (mod 8) up to X,
// decide membership in the set S of useful pairs, recover the unit u and the
// Kummer generator w, and assemble the construction report.

#include <array>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "cftower/arith.hpp"
#include "cftower/biquad_field.hpp"
#include "cftower/quad_field.hpp"

namespace cft {

enum class RejectionStage { step2, step4 };
std::string to_string(RejectionStage stage);

struct PairRejection {
  u64 p_i = 0;
  u64 p_j = 0;
  RejectionStage stage = RejectionStage::step2;

  bool operator==(const PairRejection&) const = default;
};

/// Evidence for one ordered pair in S, always expressed in the canonical
/// tie-break conventions (smaller beta, units > 1, u positive at (+,+)).
struct UsefulPair {
  u64 p_i = 0;
  u64 p_j = 0;
  u64 beta = 0;     // beta^2 = p_i (mod p_j)
  u64 e_prime = 0;  // image of e_i under sqrt(p_i) -> beta, a non-residue mod p_j
  FundamentalUnitRecord e_i;
  FundamentalUnitRecord e_j;
  FundamentalUnitRecord e_ij;
  std::optional<int> s;
  BiquadElem u;
  std::array<int, 4> quad{};  // (a, b, c, d): w = (-1)^a e_i^b e_j^c u^d
  BiquadElem w;
  std::array<unsigned, 4> psi_values{};

  bool operator==(const UsefulPair&) const = default;
};

using PairOutcome = std::variant<UsefulPair, PairRejection>;

/// Alternative tie-breaks used to check that results do not depend on them.
struct TieBreakFlips {
  bool beta = false;          // use p_j - beta
  bool u_sign = false;        // use -u
  bool unit_inverse = false;  // use e_ij^-1 (normalized) in place of e_ij

  bool any() const { return beta || u_sign || unit_inverse; }
};

struct PipelineOptions {
  unsigned workers = 1;
  bool redundancy = true;  // evaluate both orders of every pair and cross-check
  TieBreakFlips flips;
};

/// Fundamental units keyed by d; each key is computed once, concurrent readers
/// of the same key wait for the first fill.
class UnitCache {
 public:
  const FundamentalUnitRecord& get(i64 d);

 private:
  std::mutex mutex_;
  std::map<i64, std::shared_future<FundamentalUnitRecord>> entries_;
};

/// Steps 2-5 for the ordered pair (p_i, p_j). Throws DomainError for invalid
/// pairs and InvariantViolation when step 5 does not single out exactly one
/// quadruple or a tie-break flip changes the outcome.
PairOutcome evaluate_pair(u64 p_i, u64 p_j, UnitCache& cache, const TieBreakFlips& flips = {});
PairOutcome evaluate_pair(u64 p_i, u64 p_j);

/// Steps 2 and 4 only.
std::optional<RejectionStage> screen_pair(u64 p_i, u64 p_j, const QuadInt& e_i, bool flip_beta = false);

/// Every quadruple in {0,1}^4 passing step 5 for the given units.
std::vector<std::array<int, 4>> step5_quadruples(const BiquadElem& e_i, const BiquadElem& e_j,
                                                 const BiquadElem& u);

struct GrowthRecord {
  double r1 = 0.0;  // degree_exponent_bound * log 2 * (log X)^2 / X^2
  double r2 = 0.0;  // (1/2) X log X - log sqrt(radicand)

  bool operator==(const GrowthRecord&) const = default;
};

struct ConstructionReport {
  u64 xmax = 0;
  PrimePool pool;
  std::vector<UsefulPair> S;             // lexicographic in (p_i, p_j)
  std::vector<PairRejection> rejected;   // lexicographic in (p_i, p_j)
  std::vector<u64> U;
  u64 ell = 0;
  u64 degree_exponent_bound = 0;  // #S/2 + ell
  mpz_class root_disc_radicand = 1;  // root discriminant = sqrt(radicand)
  GrowthRecord growth;

  bool operator==(const ConstructionReport&) const = default;
};

ConstructionReport build_S(u64 xmax, const PipelineOptions& options = {});

/// Throws InvariantViolation when r2 < 0.
GrowthRecord check_growth(const ConstructionReport& report);

struct GeneratorManifest {
  struct KummerGenerator {
    u64 p = 0;
    u64 q = 0;
    BiquadElem w;
    bool operator==(const KummerGenerator&) const = default;
  };
  std::vector<u64> radicands;             // x^2 - p for p in U
  std::vector<KummerGenerator> kummer;    // x^2 - w over Q(sqrt p, sqrt q), p < q

  bool operator==(const GeneratorManifest&) const = default;
};

GeneratorManifest emit_generators(const ConstructionReport& report);

}  // namespace cft
