#pragma once

#include <cstdint>
#include <vector>

#include "pownum/arith.hpp"
#include "pownum/powerful.hpp"

namespace pownum::additive {

/// Coprime k-powerful decomposition x + y = z, x <= y, gcd(x, y) = 1.
struct PowerfulSumTriple {
  uint64_t x = 0;
  uint64_t y = 0;
  uint64_t z = 0;
  unsigned long k = 2;
};

/// All triples with z <= z_max whose members are each k-powerful, ordered by
/// (z, x). Enumerates the k-powerful numbers once and tests sums against that
/// list; x = 1 is allowed (vacuously k-powerful).
std::vector<PowerfulSumTriple> powerful_sum_search(uint64_t z_max, unsigned long k);

/// Same search restricted to z in [z_lo, z_hi], against a prebuilt ascending
/// k-powerful list covering [1, z_hi].
std::vector<PowerfulSumTriple> sums_in_z_range(const std::vector<uint64_t>& kpowerful,
                                               uint64_t z_lo, uint64_t z_hi,
                                               unsigned long k);

struct PowerSumHit {
  uint64_t x = 0;
  uint64_t y = 0;
  mpz_class value;  // x^n + y^n
  powerful::PowerfulVerdict verdict;
};

/// All coprime pairs 1 <= x <= y <= base_max with x^n + y^n Powerful or
/// Undecided under the budget, ordered by (x, y). n >= 2.
std::vector<PowerSumHit> power_sum_powerful_scan(unsigned long n, uint64_t base_max,
                                                 const arith::EffortBudget& effort = {});

/// Outer-loop window x in [x_lo, x_hi] of the same scan.
std::vector<PowerSumHit> power_sum_range(unsigned long n, uint64_t x_lo, uint64_t x_hi,
                                         uint64_t base_max,
                                         const arith::EffortBudget& effort = {});

}  // namespace pownum::additive
