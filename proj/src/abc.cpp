#include "pownum/abc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pownum::abc {

namespace {

constexpr uint64_t kTableCap = 10'000'000;  // desk-scale enumeration bound

using u128 = unsigned __int128;

mpz_class mpz_from_u128(u128 v) {
  mpz_class hi(static_cast<unsigned long>(v >> 64));
  hi <<= 64;
  return hi + mpz_class(static_cast<unsigned long>(v));
}

double log_mpz(const mpz_class& v) {
  signed long exp2;
  const double d = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(d) + static_cast<double>(exp2) * std::log(2.0);
}

// c^den > rad^num, exactly. The float gate only short-circuits cases far from
// the boundary; anything close is settled in integers.
bool pow_greater(uint64_t c, uint64_t den, u128 rad, uint64_t num) {
  if (num == 0) return true;  // rad^0 = 1 < c^den
  const double lhs = static_cast<double>(den) * std::log(static_cast<double>(c));
  const double rhs = static_cast<double>(num) * std::log(static_cast<double>(rad));
  const double margin = 1e-6 * std::max({1.0, lhs, rhs});
  if (lhs > rhs + margin) return true;
  if (lhs < rhs - margin) return false;
  mpz_class cp, rp;
  mpz_ui_pow_ui(cp.get_mpz_t(), c, den);
  mpz_pow_ui(rp.get_mpz_t(), mpz_from_u128(rad).get_mpz_t(), num);
  return cp > rp;
}

// rad^(den+num) < c^den, exactly. Callers prefilter rad < c, which the
// inequality implies for eps >= 0, so the exact comparison stays rare.
bool violates(uint64_t c, u128 rad, const RationalThreshold& eps) {
  mpz_class cp, rp;
  mpz_ui_pow_ui(cp.get_mpz_t(), c, eps.den);
  mpz_pow_ui(rp.get_mpz_t(), mpz_from_u128(rad).get_mpz_t(), eps.den + eps.num);
  return rp < cp;
}

}  // namespace

RationalThreshold make_rational(uint64_t num, uint64_t den) {
  if (den == 0) throw std::domain_error("rational threshold: denominator must be >= 1");
  const uint64_t g = std::gcd(num, den);
  return RationalThreshold{g ? num / g : 0, g ? den / g : 1};
}

double quality_of(const mpz_class& c, const mpz_class& rad_abc) {
  return log_mpz(c) / log_mpz(rad_abc);
}

AbcTriple make_triple(const mpz_class& a, const mpz_class& b,
                      const arith::EffortBudget& effort) {
  if (a < 1 || b < 1) throw std::domain_error("make_triple: a, b must be >= 1");
  if (arith::gcd(a, b) != 1) throw std::domain_error("make_triple: gcd(a, b) != 1");
  AbcTriple t;
  t.a = std::min(a, b);
  t.b = std::max(a, b);
  t.c = a + b;
  // gcd(a,b) = 1 forces pairwise coprimality with c = a + b, so the radical
  // of the product splits.
  t.rad_abc = arith::radical_exact(t.a, effort) * arith::radical_exact(t.b, effort) *
              arith::radical_exact(t.c, effort);
  t.quality = quality_of(t.c, t.rad_abc);
  return t;
}

bool exceeds_threshold(const AbcTriple& t, const RationalThreshold& eps) {
  mpz_class lhs, rhs;
  mpz_pow_ui(lhs.get_mpz_t(), t.rad_abc.get_mpz_t(), eps.den + eps.num);
  mpz_pow_ui(rhs.get_mpz_t(), t.c.get_mpz_t(), eps.den);
  return lhs < rhs;
}

RadicalTable::RadicalTable(uint64_t limit) {
  if (limit > kTableCap)
    throw std::length_error("RadicalTable: limit above the desk-scale cap 10^7");
  rad_.assign(limit + 1, 1);
  for (uint64_t p = 2; p <= limit; ++p) {
    if (rad_[p] != 1) continue;  // p composite: some prime already touched it
    for (uint64_t m = p; m <= limit; m += p) rad_[m] *= p;
  }
}

std::vector<AbcTriple> hits_in_range(const RadicalTable& table, uint64_t c_lo,
                                     uint64_t c_hi, const RationalThreshold& q_min) {
  std::vector<AbcTriple> out;
  c_lo = std::max<uint64_t>(c_lo, 2);
  const bool prefilter = q_min.num >= q_min.den;  // quality >= 1 needs rad < c
  for (uint64_t c = c_lo; c <= c_hi; ++c) {
    const uint64_t rc = table[c];
    for (uint64_t a = 1; a <= c / 2; ++a) {
      if (std::gcd(a, c) != 1) continue;  // gcd(a, b) = gcd(a, c)
      const uint64_t b = c - a;
      const u128 rad = static_cast<u128>(table[a]) * table[b] * rc;
      if (prefilter && rad >= c) continue;
      if (!pow_greater(c, q_min.den, rad, q_min.num)) continue;
      AbcTriple t;
      t.a = static_cast<unsigned long>(a);
      t.b = static_cast<unsigned long>(b);
      t.c = static_cast<unsigned long>(c);
      t.rad_abc = mpz_from_u128(rad);
      t.quality = quality_of(t.c, t.rad_abc);
      out.push_back(std::move(t));
    }
  }
  return out;
}

void sort_by_quality(std::vector<AbcTriple>& hits) {
  std::sort(hits.begin(), hits.end(), [](const AbcTriple& x, const AbcTriple& y) {
    // log c1 * log r2 vs log c2 * log r1, with a tie window deferring to
    // (c, a) so equal-quality triples order deterministically.
    const double lhs = log_mpz(x.c) * log_mpz(y.rad_abc);
    const double rhs = log_mpz(y.c) * log_mpz(x.rad_abc);
    const double tol = 1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    if (lhs > rhs + tol) return true;
    if (rhs > lhs + tol) return false;
    if (x.c != y.c) return x.c < y.c;
    return x.a < y.a;
  });
}

std::vector<AbcTriple> enumerate_hits(uint64_t c_max, const RationalThreshold& q_min) {
  if (c_max < 2) throw std::domain_error("enumerate_hits: c_max must be >= 2");
  const RadicalTable table(c_max);
  std::vector<AbcTriple> hits = hits_in_range(table, 2, c_max, q_min);
  sort_by_quality(hits);
  return hits;
}

uint64_t violations_in_range(const RadicalTable& table, uint64_t c_lo, uint64_t c_hi,
                             const RationalThreshold& eps) {
  uint64_t count = 0;
  c_lo = std::max<uint64_t>(c_lo, 2);
  for (uint64_t c = c_lo; c <= c_hi; ++c) {
    const uint64_t rc = table[c];
    for (uint64_t a = 1; a <= c / 2; ++a) {
      if (std::gcd(a, c) != 1) continue;
      const u128 rad = static_cast<u128>(table[a]) * table[c - a] * rc;
      if (rad >= c) continue;  // rad^(den+num) < c^den forces rad < c
      if (violates(c, rad, eps)) ++count;
    }
  }
  return count;
}

uint64_t count_epsilon_violations(uint64_t c_max, const RationalThreshold& eps) {
  if (c_max < 2) throw std::domain_error("count_epsilon_violations: c_max must be >= 2");
  const RadicalTable table(c_max);
  return violations_in_range(table, 2, c_max, eps);
}

}  // namespace pownum::abc
