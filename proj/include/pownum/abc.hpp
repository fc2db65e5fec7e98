#pragma once

#include <cstdint>
#include <vector>

#include "pownum/arith.hpp"

namespace pownum::abc {

/// Exact nonnegative rational, kept in lowest terms. Thresholds are never
/// floats: every comparison they enter is done in integer arithmetic.
struct RationalThreshold {
  uint64_t num = 0;
  uint64_t den = 1;
};

RationalThreshold make_rational(uint64_t num, uint64_t den);

/// Coprime triple a + b = c with a <= b. rad_abc is rad(abc), computed as
/// rad(a)*rad(b)*rad(c) on the pairwise-coprime parts. quality is
/// log(c)/log(rad_abc), display precision only.
struct AbcTriple {
  mpz_class a, b, c;
  mpz_class rad_abc;
  double quality = 0.0;
};

/// Builds the canonical triple from coprime a, b (swapped so a <= b).
/// Throws std::domain_error when gcd(a,b) != 1, UndecidedError when a radical
/// exceeds the budget.
AbcTriple make_triple(const mpz_class& a, const mpz_class& b,
                      const arith::EffortBudget& effort = {});

/// rad(abc)^(1+eps) < c, evaluated exactly as rad^(den+num) < c^den.
bool exceeds_threshold(const AbcTriple& t, const RationalThreshold& eps);

double quality_of(const mpz_class& c, const mpz_class& rad_abc);

/// Radicals of 1..limit by sieve (smallest-prime-factor style pass),
/// built once and shared read-only across enumeration partitions.
class RadicalTable {
 public:
  explicit RadicalTable(uint64_t limit);
  uint64_t operator[](uint64_t n) const { return rad_[n]; }
  uint64_t limit() const { return rad_.size() - 1; }

 private:
  std::vector<uint64_t> rad_;
};

/// Triples with c in [c_lo, c_hi] whose quality strictly exceeds q_min,
/// i.e. c^den > rad(abc)^num exactly. Ordered by (c, a).
std::vector<AbcTriple> hits_in_range(const RadicalTable& table, uint64_t c_lo,
                                     uint64_t c_hi, const RationalThreshold& q_min);

/// All hits with c <= c_max, sorted by descending quality, ties broken by
/// ascending c then ascending a.
std::vector<AbcTriple> enumerate_hits(uint64_t c_max, const RationalThreshold& q_min);

void sort_by_quality(std::vector<AbcTriple>& hits);

uint64_t violations_in_range(const RadicalTable& table, uint64_t c_lo, uint64_t c_hi,
                             const RationalThreshold& eps);

/// Number of coprime triples with c <= c_max and rad(abc)^(1+eps) < c.
uint64_t count_epsilon_violations(uint64_t c_max, const RationalThreshold& eps);

}  // namespace pownum::abc
