#include "cftower/tower.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include "cftower/errors.hpp"

namespace cft {

std::string to_string(RejectionStage stage) {
  return stage == RejectionStage::step2 ? "step2" : "step4";
}

const FundamentalUnitRecord& UnitCache::get(i64 d) {
  std::promise<FundamentalUnitRecord> promise;
  std::shared_future<FundamentalUnitRecord> future;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(d);
    if (it == entries_.end()) {
      future = promise.get_future().share();
      entries_.emplace(d, future);
      owner = true;
    } else {
      future = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(fundamental_unit(d));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  // The map keeps a copy of the shared state alive, so the reference stays valid.
  return future.get();
}

namespace {

void require_pool_prime(u64 p) {
  if (p % 8 != 1 || !is_prime(p)) {
    throw DomainError("evaluate_pair: " + std::to_string(p) + " is not a prime = 1 (mod 8)");
  }
}

bool positive_at_identity(const BiquadElem& x) { return embedding_signs(x)[0] > 0; }

BiquadElem build_w(const std::array<int, 4>& quad, const BiquadElem& e_i, const BiquadElem& e_j,
                   const BiquadElem& u) {
  BiquadElem w = BiquadElem::integer(u.p(), u.q(), quad[0] ? -1 : 1);
  if (quad[1]) w = w * e_i;
  if (quad[2]) w = w * e_j;
  if (quad[3]) w = w * u;
  return w;
}

struct Step5 {
  std::array<int, 4> quad{};
  BiquadElem w;
};

Step5 unique_step5(u64 p_i, u64 p_j, const BiquadElem& e_i, const BiquadElem& e_j, const BiquadElem& u) {
  const auto quads = step5_quadruples(e_i, e_j, u);
  if (quads.size() != 1) {
    throw InvariantViolation("step 5 for (" + std::to_string(p_i) + ", " + std::to_string(p_j) + ") found " +
                             std::to_string(quads.size()) + " quadruples instead of exactly one");
  }
  return {quads.front(), build_w(quads.front(), e_i, e_j, u)};
}

}  // namespace

std::vector<std::array<int, 4>> step5_quadruples(const BiquadElem& e_i, const BiquadElem& e_j,
                                                 const BiquadElem& u) {
  const auto homs = psi_homs(u.p(), u.q());
  std::array<std::array<unsigned, 4>, 4> images{};  // images[generator][hom]
  for (std::size_t h = 0; h < 4; ++h) {
    images[0][h] = 7;
    images[1][h] = homs[h](e_i);
    images[2][h] = homs[h](e_j);
    images[3][h] = homs[h](u);
  }
  const BiquadElem one = BiquadElem::integer(u.p(), u.q(), 1);
  std::vector<std::array<int, 4>> passing;
  for (unsigned mask = 0; mask < 16; ++mask) {
    const std::array<int, 4> quad = {static_cast<int>(mask >> 3 & 1U), static_cast<int>(mask >> 2 & 1U),
                                     static_cast<int>(mask >> 1 & 1U), static_cast<int>(mask & 1U)};
    bool ok = true;
    for (std::size_t h = 0; h < 4 && ok; ++h) {
      unsigned value = 1;
      for (std::size_t g = 0; g < 4; ++g) {
        if (quad[g]) value = value * images[g][h] % 8;
      }
      ok = value == 1 || value == 5;
    }
    if (ok && build_w(quad, e_i, e_j, u) != one) passing.push_back(quad);
  }
  return passing;
}

std::optional<RejectionStage> screen_pair(u64 p_i, u64 p_j, const QuadInt& e_i, bool flip_beta) {
  if (legendre_symbol(static_cast<i64>(p_i), p_j) != 1) return RejectionStage::step2;
  u64 beta = sqrt_mod_p(static_cast<i64>(p_i), p_j);
  if (flip_beta) beta = p_j - beta;
  const u64 e_prime = unit_mod_prime(e_i, beta, p_j);
  if (legendre_symbol(static_cast<i64>(e_prime), p_j) == 1) return RejectionStage::step4;
  return std::nullopt;
}

PairOutcome evaluate_pair(u64 p_i, u64 p_j, UnitCache& cache, const TieBreakFlips& flips) {
  if (p_i == p_j) throw DomainError("evaluate_pair: pair must consist of distinct primes");
  require_pool_prime(p_i);
  require_pool_prime(p_j);

  const auto& unit_i = cache.get(static_cast<i64>(p_i));
  if (auto stage = screen_pair(p_i, p_j, unit_i.unit, flips.beta)) {
    if (flips.beta && screen_pair(p_i, p_j, unit_i.unit, false) != stage) {
      throw InvariantViolation("step 4 decision depends on the choice of beta");
    }
    return PairRejection{p_i, p_j, *stage};
  }
  if (flips.beta && screen_pair(p_i, p_j, unit_i.unit, false).has_value()) {
    throw InvariantViolation("step 4 decision depends on the choice of beta");
  }

  UsefulPair pair;
  pair.p_i = p_i;
  pair.p_j = p_j;
  pair.beta = sqrt_mod_p(static_cast<i64>(p_i), p_j);
  pair.e_prime = unit_mod_prime(unit_i.unit, pair.beta, p_j);
  pair.e_i = unit_i;
  pair.e_j = cache.get(static_cast<i64>(p_j));
  pair.e_ij = cache.get(static_cast<i64>(p_i * p_j));

  const auto p = static_cast<i64>(p_i);
  const auto q = static_cast<i64>(p_j);
  const QuadInt canonical_ij = normalize_at_least_one_positive(pair.e_ij.unit);
  const QuadInt path_ij =
      flips.unit_inverse ? normalize_at_least_one_positive(canonical_ij.unit_inverse()) : canonical_ij;

  const BiquadElem big_i = BiquadElem::from_quad(p, q, pair.e_i.unit);
  const BiquadElem big_j = BiquadElem::from_quad(p, q, pair.e_j.unit);

  UnitSquareRoot path = unit_square_root(p, q, pair.e_i.unit, pair.e_j.unit, path_ij);
  if (flips.u_sign) path.u = -path.u;
  const Step5 path_step5 = unique_step5(p_i, p_j, big_i, big_j, path.u);

  if (!flips.u_sign && !flips.unit_inverse) {
    pair.s = path.s;
    pair.u = std::move(path.u);
    pair.quad = path_step5.quad;
    pair.w = path_step5.w;
  } else {
    // Map the flipped-path root back to the canonical root.
    auto [s, target] = unit_square_target(p, q, pair.e_i.unit, pair.e_j.unit, canonical_ij);
    BiquadElem u = path.u;
    if (flips.unit_inverse) {
      u = path.s ? big_i * big_j * path.u.inverse() : path.u.inverse();
    }
    if (!positive_at_identity(u)) u = -u;
    if (u * u != target) throw InvariantViolation("canonical unit square root failed exact verification");
    const Step5 canonical = unique_step5(p_i, p_j, big_i, big_j, u);
    if (flips.unit_inverse) {
      if (!exact_square_root(path_step5.w * canonical.w)) {
        throw InvariantViolation("w from the inverted unit is not in the canonical square class");
      }
    } else if (path_step5.w != canonical.w) {
      throw InvariantViolation("w depends on the sign of u");
    }
    pair.s = s;
    pair.u = std::move(u);
    pair.quad = canonical.quad;
    pair.w = canonical.w;
  }

  const auto homs = psi_homs(p, q);
  for (std::size_t h = 0; h < 4; ++h) pair.psi_values[h] = homs[h](pair.w);
  if (total_positivity(pair.w) != Positivity::totally_negative) {
    throw InvariantViolation("w for (" + std::to_string(p_i) + ", " + std::to_string(p_j) +
                             ") is not totally negative");
  }
  return pair;
}

PairOutcome evaluate_pair(u64 p_i, u64 p_j) {
  UnitCache cache;
  return evaluate_pair(p_i, p_j, cache);
}

namespace {

// Runs job(k) for k in [0, count) on `workers` threads; rethrows the
// exception of the smallest failing index.
template <typename Job>
void run_parallel(std::size_t count, unsigned workers, Job job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        job(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

UsefulPair mirror(const UsefulPair& forward, u64 beta, u64 e_prime) {
  UsefulPair back = forward;
  std::swap(back.p_i, back.p_j);
  std::swap(back.e_i, back.e_j);
  std::swap(back.quad[1], back.quad[2]);
  back.beta = beta;
  back.e_prime = e_prime;
  // Coordinates are taken relative to (sqrt p_i, sqrt p_j), so swap the roles.
  auto swap_field = [](const BiquadElem& x) {
    const auto& n = x.numerators();
    return BiquadElem(x.q(), x.p(), {n[0], n[2], n[1], n[3]}, x.denominator());
  };
  back.u = swap_field(forward.u);
  back.w = swap_field(forward.w);
  std::swap(back.psi_values[1], back.psi_values[2]);
  return back;
}

}  // namespace

ConstructionReport build_S(u64 xmax, const PipelineOptions& options) {
  ConstructionReport report;
  report.xmax = xmax;
  report.pool = sieve_primes_1_mod_8(xmax);
  const auto& primes = report.pool.primes;
  const std::size_t n = primes.size();

  UnitCache cache;
  for (u64 p : primes) cache.get(static_cast<i64>(p));

  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && (options.redundancy || i < j)) tasks.emplace_back(i, j);
    }
  }
  std::vector<std::optional<PairOutcome>> outcomes(tasks.size());
  run_parallel(tasks.size(), options.workers, [&](std::size_t k) {
    const auto [i, j] = tasks[k];
    outcomes[k] = evaluate_pair(primes[i], primes[j], cache, options.flips);
  });

  std::map<std::pair<u64, u64>, PairOutcome> by_pair;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    by_pair.emplace(std::pair{primes[tasks[k].first], primes[tasks[k].second]}, std::move(*outcomes[k]));
  }

  if (!options.redundancy) {
    // Fill in the reversed orders from steps 2 and 4 plus the forward evidence.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const u64 p = primes[i];
        const u64 q = primes[j];
        const auto& forward = by_pair.at({p, q});
        const auto stage = screen_pair(q, p, cache.get(static_cast<i64>(q)).unit);
        if (stage) {
          by_pair.emplace(std::pair{q, p}, PairRejection{q, p, *stage});
        } else if (const auto* fwd = std::get_if<UsefulPair>(&forward)) {
          const u64 beta = sqrt_mod_p(static_cast<i64>(q), p);
          by_pair.emplace(std::pair{q, p},
                          mirror(*fwd, beta, unit_mod_prime(cache.get(static_cast<i64>(q)).unit, beta, p)));
        } else {
          by_pair.emplace(std::pair{q, p}, evaluate_pair(q, p, cache, options.flips));
        }
      }
    }
  }

  for (auto& [key, outcome] : by_pair) {
    const auto& [p, q] = key;
    const auto& reverse = by_pair.at({q, p});
    const auto* here = std::get_if<UsefulPair>(&outcome);
    const auto* there = std::get_if<UsefulPair>(&reverse);
    if ((here == nullptr) != (there == nullptr)) {
      throw InvariantViolation("S is not closed under swapping (" + std::to_string(p) + ", " +
                               std::to_string(q) + ")");
    }
    if (here != nullptr && p < q) {
      const auto& n = there->w.numerators();
      const BiquadElem swapped(there->w.q(), there->w.p(), {n[0], n[2], n[1], n[3]}, there->w.denominator());
      if (swapped != here->w) {
        throw InvariantViolation("w differs between (" + std::to_string(p) + ", " + std::to_string(q) +
                                 ") and its swap");
      }
    }
  }

  std::set<u64> used;
  for (auto& [key, outcome] : by_pair) {
    if (auto* pair = std::get_if<UsefulPair>(&outcome)) {
      used.insert(pair->p_i);
      report.S.push_back(std::move(*pair));
    } else {
      report.rejected.push_back(std::get<PairRejection>(outcome));
    }
  }
  if (report.S.size() % 2 != 0) throw InvariantViolation("#S is odd");
  report.U.assign(used.begin(), used.end());
  report.ell = report.U.size();
  report.degree_exponent_bound = report.S.size() / 2 + report.ell;
  report.root_disc_radicand = 1;
  for (u64 p : report.U) report.root_disc_radicand *= static_cast<unsigned long>(p);
  report.growth = check_growth(report);
  return report;
}

GrowthRecord check_growth(const ConstructionReport& report) {
  const double x = static_cast<double>(report.xmax);
  const double log_x = std::log(x);
  GrowthRecord growth;
  growth.r1 = static_cast<double>(report.degree_exponent_bound) * std::log(2.0) * log_x * log_x / (x * x);
  double log_root_disc = 0.0;
  for (u64 p : report.U) log_root_disc += 0.5 * std::log(static_cast<double>(p));
  growth.r2 = 0.5 * x * log_x - log_root_disc;
  if (growth.r2 < 0) throw InvariantViolation("root discriminant exceeds (1/2) X log X");
  return growth;
}

GeneratorManifest emit_generators(const ConstructionReport& report) {
  GeneratorManifest manifest;
  manifest.radicands = report.U;
  for (const auto& pair : report.S) {
    if (pair.p_i < pair.p_j) manifest.kummer.push_back({pair.p_i, pair.p_j, pair.w});
  }
  return manifest;
}

}  // namespace cft
