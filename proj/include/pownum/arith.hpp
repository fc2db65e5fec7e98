#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pownum {

/// Thrown when an exact answer would require factoring past the effort budget.
/// Carries the composite cofactor that resisted the budget.
class UndecidedError : public std::runtime_error {
 public:
  UndecidedError(const std::string& what, mpz_class cofactor)
      : std::runtime_error(what), cofactor_(std::move(cofactor)) {}
  const mpz_class& cofactor() const { return cofactor_; }

 private:
  mpz_class cofactor_;
};

namespace arith {

struct PrimePower {
  mpz_class prime;
  unsigned long exponent = 0;

  friend bool operator==(const PrimePower& a, const PrimePower& b) {
    return a.exponent == b.exponent && a.prime == b.prime;
  }
};

/// Canonical factorization: primes strictly ascending, exponents >= 1.
/// The factorization of 1 is the empty list.
struct Factorization {
  std::vector<PrimePower> factors;

  mpz_class product() const;
  mpz_class radical() const;
  /// Minimum exponent over all factors; ULONG_MAX for the empty list, so
  /// min_exponent() >= k reads correctly for x = 1.
  unsigned long min_exponent() const;

  friend bool operator==(const Factorization& a, const Factorization& b) {
    return a.factors == b.factors;
  }
};

/// Knobs that bound the work factorize() may do. Identical budgets and seed
/// give identical results, bit for bit, on every call.
struct EffortBudget {
  uint64_t trial_division_bound = 1'000'000;
  uint64_t rho_iteration_budget = 10'000'000;
  uint64_t rng_seed = 0;
};

/// Outcome of factorize(): listed primes carry their exact exponent in n;
/// cofactor is 1 on full success, otherwise a composite with no prime factor
/// <= the trial bound, coprime to the listed primes, and not a perfect power
/// detectable within the budget.
struct FactorResult {
  Factorization factorization;
  mpz_class cofactor = 1;

  bool complete() const { return cofactor == 1; }
};

struct RadicalResult {
  mpz_class value;         // product of the distinct known primes
  mpz_class cofactor = 1;  // 1 when value == rad(n) exactly

  bool complete() const { return cofactor == 1; }
};

/// Trial division to the budget's bound, then Pollard rho (Brent) with a
/// seeded iteration sequence, recursing on cofactors. Inputs that fit in a
/// machine word always factor completely. Throws std::domain_error for n < 1.
FactorResult factorize(const mpz_class& n, const EffortBudget& effort = {});

/// Trial division phase only: extracts every prime factor <= the bound.
FactorResult factorize_trial(const mpz_class& n, const EffortBudget& effort = {});

/// Rho phase only, for n already known to have no prime factor <= the bound.
FactorResult factorize_rough(const mpz_class& n, const EffortBudget& effort = {});

/// Deterministic primality test. Exact for all n below
/// 3317044064679887385961981 (Miller-Rabin with bases 2..41); larger inputs
/// additionally pass a strong Lucas test (BPSW strength, no counterexample
/// known). Never consults a budget and never randomizes.
bool is_prime(const mpz_class& n);

mpz_class gcd(const mpz_class& a, const mpz_class& b);

/// Largest m with m*m <= n. Exact for arbitrary-precision n >= 0.
mpz_class isqrt(const mpz_class& n);

/// Product of the distinct primes dividing n; rad(1) = 1. An incomplete
/// result carries the radical of the factored part plus the cofactor.
RadicalResult radical(const mpz_class& n, const EffortBudget& effort = {});

/// radical() that throws UndecidedError instead of returning a partial value.
mpz_class radical_exact(const mpz_class& n, const EffortBudget& effort = {});

/// Product of all primes <= x, computed from a sieve, never by factoring.
/// primorial(0) = primorial(1) = 1 (empty product).
mpz_class primorial(unsigned long x);

/// rad(n!) = primorial(n); never touches n! itself.
mpz_class radical_of_factorial(unsigned long n);

/// Exact n!; 0! = 1.
mpz_class factorial(unsigned long n);

/// Ascending primes <= limit (plain sieve; limit capped at 10^9).
std::vector<uint32_t> primes_up_to(uint64_t limit);

/// Shared read-only table of the primes below 10^6, built once.
const std::vector<uint32_t>& small_primes();

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime_u64(uint64_t n);

/// Complete factorization of a 64-bit integer: trial division by primes up to
/// min(trial_bound, sqrt(n)), then Brent rho restarted until it succeeds.
std::vector<std::pair<uint64_t, unsigned long>> factor_u64(
    uint64_t n, uint64_t trial_bound = 1'000'000, uint64_t rng_seed = 0);

}  // namespace arith
}  // namespace pownum
