#pragma once

#include <cstdint>
#include <vector>

#include "pownum/arith.hpp"

namespace pownum::powerful {

enum class Status { Powerful, NotPowerful, Undecided };

/// Certified answer to "is x powerful?".
///   Powerful:    certificate is the full factorization, every exponent >= 2
///                (x = 1 carries the empty certificate).
///   NotPowerful: witness_prime divides x exactly once.
///   Undecided:   certificate holds the fully factored part (itself powerful)
///                and residual_cofactor the composite remainder the budget
///                could not break.
struct PowerfulVerdict {
  Status status = Status::Undecided;
  arith::Factorization certificate;
  mpz_class witness_prime = 0;
  mpz_class residual_cofactor = 1;
};

PowerfulVerdict powerful_verdict(const mpz_class& x,
                                 const arith::EffortBudget& effort = {});

/// Verdict for an integer given as a (possibly partial) factorization.
PowerfulVerdict classify_factor_result(const arith::FactorResult& f);

/// True iff every prime exponent of x is >= 2 (vacuously true for x = 1).
/// Throws UndecidedError when the verdict would be Undecided.
bool is_powerful(const mpz_class& x, const arith::EffortBudget& effort = {});

/// True iff every prime exponent of x is >= k. Requires k >= 2.
bool k_powerful_check(const mpz_class& x, unsigned long k,
                      const arith::EffortBudget& effort = {});

/// All powerful numbers <= limit, ascending. Generated as a^2*b^3 over
/// squarefree b; each powerful number has exactly one such representation,
/// so no dedup pass is needed.
std::vector<uint64_t> enumerate_powerful(uint64_t limit);

/// Same set restricted to [lo, hi]; concatenating consecutive windows in
/// order reproduces enumerate_powerful exactly.
std::vector<uint64_t> enumerate_powerful_range(uint64_t lo, uint64_t hi);

/// |{powerful x <= limit}| without materializing the list.
uint64_t count_powerful(uint64_t limit);

/// All k-powerful numbers <= limit (every exponent >= k), ascending.
/// Independent generator (prime DFS) from enumerate_powerful.
std::vector<uint64_t> enumerate_k_powerful(uint64_t limit, unsigned long k);

/// True iff rad(x)^2 <= x. Every powerful number qualifies (with equality at
/// x = 4); the converse fails, e.g. at x = 48.
bool radical_dominated(const mpz_class& x, const arith::EffortBudget& effort = {});

}  // namespace pownum::powerful
