#include "cftower/chebotarev.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "cftower/errors.hpp"

namespace cft {

bool frobenius_membership(u64 p_i, u64 p_j, const QuadInt& e_i) {
  if (p_j == p_i) throw DomainError("frobenius_membership: p_j must differ from p_i");
  if (p_j % 8 != 1) return false;
  if (legendre_symbol(static_cast<i64>(p_i), p_j) != 1) return false;
  const u64 beta = sqrt_mod_p(static_cast<i64>(p_i), p_j);
  return legendre_symbol(static_cast<i64>(unit_mod_prime(e_i, beta, p_j)), p_j) == -1;
}

bool frobenius_membership(u64 p_i, u64 p_j) {
  return frobenius_membership(p_i, p_j, fundamental_unit(static_cast<i64>(p_i)).unit);
}

DensityReport density_scan(u64 p_i, u64 x, unsigned workers) {
  if (x < 1000) throw DomainError("density_scan: x must be >= 1000");
  if (p_i % 8 != 1 || !is_prime(p_i)) throw DomainError("density_scan: p_i must be a prime = 1 (mod 8)");

  const QuadInt e_i = fundamental_unit(static_cast<i64>(p_i)).unit;
  std::vector<u64> candidates;
  for (u64 p : sieve_primes(x)) {
    if (p != 2 && p != p_i) candidates.push_back(p);
  }

  const unsigned parts = std::max(1U, workers);
  std::vector<u64> partial(parts, 0);
  auto scan = [&](unsigned part) {
    const std::size_t begin = candidates.size() * part / parts;
    const std::size_t end = candidates.size() * (part + 1) / parts;
    for (std::size_t k = begin; k < end; ++k) {
      if (frobenius_membership(p_i, candidates[k], e_i)) ++partial[part];
    }
  };
  if (parts == 1) {
    scan(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < parts; ++t) threads.emplace_back(scan, t);
    for (auto& t : threads) t.join();
  }

  DensityReport report;
  report.p_i = p_i;
  report.x = x;
  for (u64 c : partial) report.count += c;
  const double xd = static_cast<double>(x);
  const double log_x = std::log(xd);
  report.expected = log_integral(xd) / 16.0;
  report.tolerance = xd / (log_x * log_x) / 16.0;
  report.within = std::abs(report.deviation()) <= report.tolerance;
  return report;
}

}  // namespace cft
