#pragma once

#include <cstdint>
#include <vector>

#include "pownum/arith.hpp"
#include "pownum/powerful.hpp"

namespace pownum::seq {

/// One finding of factorial_neighborhood_search: x = (n!)^r + offset is
/// Powerful or Undecided (refuted values are never emitted).
struct NeighborhoodHit {
  uint64_t n = 0;
  unsigned long r = 1;
  int64_t offset = 0;
  mpz_class x;
  powerful::PowerfulVerdict verdict;
};

/// Exponent of the prime p in n!, by Legendre's sum of floor(n/p^i).
uint64_t legendre_exponent(uint64_t n, uint64_t p);

/// Scans x = (n!)^r + offset for 1 <= n <= n_max, |offset| <= k, x >= 1, and
/// reports every x that is powerful or undecided, ascending by (n, offset).
///
/// For offset != 0 the powerfulness check never factors (n!)^r: a prime
/// p <= n divides x exactly when p divides the offset, so only offset
/// divisors and primes above n enter trial division; exponents come from
/// exact extraction and the leftover cofactor goes through the budgeted
/// rho phase.
std::vector<NeighborhoodHit> factorial_neighborhood_search(
    uint64_t n_max, uint64_t k, unsigned long r, const arith::EffortBudget& effort = {});

/// Window [n_lo, n_hi] of the same search; concatenating windows in order
/// reproduces the full output.
std::vector<NeighborhoodHit> factorial_neighborhood_range(
    uint64_t n_lo, uint64_t n_hi, uint64_t k, unsigned long r,
    const arith::EffortBudget& effort = {});

/// All n <= n_max with n! powerful, decided via Legendre exponents only
/// (n! itself is never formed or factored). A prime in (n/2, n] has exponent
/// exactly 1, which settles every n >= 2 in O(1) after the sieve.
std::vector<uint64_t> factorial_powerful_scan(uint64_t n_max);
std::vector<uint64_t> factorial_powerful_scan_range(uint64_t n_lo, uint64_t n_hi);

struct BrocardHit {
  uint64_t n = 0;
  mpz_class m;
};

/// All (n, m) with n <= n_max, n! + k >= 0 and n! + k = m^2 exactly, m >= 0.
std::vector<BrocardHit> brocard_search(uint64_t n_max, const mpz_class& k);
std::vector<BrocardHit> brocard_range(uint64_t n_lo, uint64_t n_hi, const mpz_class& k);

struct Pow2Hit {
  uint64_t n = 0;
  mpz_class x;
  powerful::PowerfulVerdict verdict;
};

/// All n <= n_max where 2^n + 1 is Powerful or Undecided under the budget.
std::vector<Pow2Hit> pow2_plus_one_search(uint64_t n_max,
                                          const arith::EffortBudget& effort = {});
std::vector<Pow2Hit> pow2_plus_one_range(uint64_t n_lo, uint64_t n_hi,
                                         const arith::EffortBudget& effort = {});

}  // namespace pownum::seq
