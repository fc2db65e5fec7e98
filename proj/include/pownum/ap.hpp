#pragma once

#include <cstdint>
#include <vector>

#include "pownum/arith.hpp"

namespace pownum::ap {

/// Coprime arithmetic progression a, a+d, a+2d, ...
struct ApConfig {
  uint64_t a = 1;
  uint64_t d = 1;
};

/// Throws std::domain_error unless a >= 1, d >= 1 and gcd(a, d) = 1.
void validate(const ApConfig& cfg);

/// Starting values v <= value_limit such that v, v+d, ..., v+(run_len-1)d are
/// all powerful and v lies in the progression. Ascending. run_len in {1,2,3}.
/// Works by intersecting the powerful numbers up to value_limit+(run_len-1)d
/// with the residue class of a mod d; no term is ever factored.
std::vector<uint64_t> ap_powerful_runs(const ApConfig& cfg, uint64_t value_limit,
                                       unsigned run_len);

/// Same filter over start values in [lo, hi] against a prebuilt ascending
/// powerful list covering up to hi + (run_len-1)*d.
std::vector<uint64_t> runs_among(const std::vector<uint64_t>& powerful_sorted,
                                 const ApConfig& cfg, uint64_t lo, uint64_t hi,
                                 unsigned run_len);

/// Numeric check of the epsilon = 1/6 chain for one AP window
/// (a_k, a_k+1, a_k+2) with difference d, all in exact arithmetic:
///   identity_ok   a_k * a_k+2 == a_k+1^2 - d^2
///   premise_ok    a_k > rad(d)^5
///   powerful_ok   a_k, a_k+1, a_k+2 all powerful
///   chain_ok      rad(d^2 * a_k * a_k+1^2 * a_k+2)^7 < (a_k+1^2)^6
struct InequalityReport {
  bool identity_ok = false;
  bool premise_ok = false;
  bool powerful_ok = false;
  mpz_class lhs;  // rad(abc)^7
  mpz_class rhs;  // c^6 = a_k+1^12
  bool chain_ok = false;
};

InequalityReport theorem_chain_check(const mpz_class& a_k, const mpz_class& a_k1,
                                     const mpz_class& a_k2, const mpz_class& d,
                                     const arith::EffortBudget& effort = {});

}  // namespace pownum::ap
