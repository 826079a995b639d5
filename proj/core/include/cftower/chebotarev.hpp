#pragma once

// Empirical check of the density of primes p_j forming a useful pair with a
// fixed p_i: predicted Li(x)/16 with error at most (1/16) x / (log x)^2.

#include "cftower/arith.hpp"
#include "cftower/quad_field.hpp"

namespace cft {

/// Steps 1, 2 and 4 for the pair (p_i, p_j): p_j = 1 (mod 8), (p_i/p_j) = 1 and
/// e'_i is a non-residue mod p_j. Requires p_j odd prime, p_j != p_i.
bool frobenius_membership(u64 p_i, u64 p_j, const QuadInt& e_i);
bool frobenius_membership(u64 p_i, u64 p_j);

struct DensityReport {
  u64 p_i = 0;
  u64 x = 0;
  u64 count = 0;
  double expected = 0.0;   // Li(x) / 16
  double tolerance = 0.0;  // (1/16) x / (log x)^2
  bool within = false;     // |count - expected| <= tolerance

  double deviation() const { return static_cast<double>(count) - expected; }
  bool operator==(const DensityReport&) const = default;
};

/// Counts p_j <= x with p_j not dividing 2 p_i and frobenius_membership true.
/// The scan is split into `workers` ranges with an additive merge.
/// Requires x >= 1000 and p_i a prime = 1 (mod 8).
DensityReport density_scan(u64 p_i, u64 x, unsigned workers = 1);

}  // namespace cft
