#include "pownum/powerful.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace pownum::powerful {

namespace {

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

uint64_t icbrt_u64(uint64_t n) {
  uint64_t r = static_cast<uint64_t>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && r * r > n / r) --r;
  while ((r + 1) * (r + 1) <= n / (r + 1)) ++r;
  return r;
}

bool squarefree_u64(uint64_t b) {
  for (auto& [p, e] : arith::factor_u64(b)) {
    (void)p;
    if (e > 1) return false;
  }
  return true;
}

}  // namespace

PowerfulVerdict classify_factor_result(const arith::FactorResult& f) {
  PowerfulVerdict v;
  for (const auto& pp : f.factorization.factors) {
    if (pp.exponent == 1) {
      v.status = Status::NotPowerful;
      v.witness_prime = pp.prime;
      return v;
    }
  }
  if (!f.complete()) {
    v.status = Status::Undecided;
    v.certificate = f.factorization;
    v.residual_cofactor = f.cofactor;
    return v;
  }
  v.status = Status::Powerful;
  v.certificate = f.factorization;
  return v;
}

PowerfulVerdict powerful_verdict(const mpz_class& x, const arith::EffortBudget& effort) {
  if (x < 1) throw std::domain_error("powerful_verdict: argument must be >= 1");
  // Cheap refutation first: a small prime with exponent 1 settles it without
  // any rho work on the cofactor.
  arith::FactorResult head = arith::factorize_trial(x, effort);
  for (const auto& pp : head.factorization.factors) {
    if (pp.exponent == 1) {
      PowerfulVerdict v;
      v.status = Status::NotPowerful;
      v.witness_prime = pp.prime;
      return v;
    }
  }
  if (head.complete()) return classify_factor_result(head);
  arith::FactorResult tail = arith::factorize_rough(head.cofactor, effort);
  for (auto& pp : tail.factorization.factors)
    head.factorization.factors.push_back(std::move(pp));
  std::sort(head.factorization.factors.begin(), head.factorization.factors.end(),
            [](const arith::PrimePower& a, const arith::PrimePower& b) {
              return a.prime < b.prime;
            });
  head.cofactor = tail.cofactor;
  return classify_factor_result(head);
}

bool is_powerful(const mpz_class& x, const arith::EffortBudget& effort) {
  const PowerfulVerdict v = powerful_verdict(x, effort);
  if (v.status == Status::Undecided)
    throw UndecidedError("is_powerful: budget exceeded", v.residual_cofactor);
  return v.status == Status::Powerful;
}

bool k_powerful_check(const mpz_class& x, unsigned long k,
                      const arith::EffortBudget& effort) {
  if (k < 2) throw std::domain_error("k_powerful_check: k must be >= 2");
  if (x < 1) throw std::domain_error("k_powerful_check: argument must be >= 1");
  const arith::FactorResult f = arith::factorize(x, effort);
  if (!f.complete())
    throw UndecidedError("k_powerful_check: budget exceeded", f.cofactor);
  return f.factorization.min_exponent() >= k;
}

std::vector<uint64_t> enumerate_powerful_range(uint64_t lo, uint64_t hi) {
  std::vector<uint64_t> out;
  if (hi == 0 || lo > hi) return out;
  lo = std::max<uint64_t>(lo, 1);
  for (uint64_t b = 1; b <= icbrt_u64(hi); ++b) {
    if (!squarefree_u64(b)) continue;
    const uint64_t cube = b * b * b;
    const uint64_t a_hi = isqrt_u64(hi / cube);
    for (uint64_t a = 1; a <= a_hi; ++a) {
      const uint64_t v = a * a * cube;
      if (v >= lo) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<uint64_t> enumerate_powerful(uint64_t limit) {
  if (limit < 1) throw std::domain_error("enumerate_powerful: limit must be >= 1");
  return enumerate_powerful_range(1, limit);
}

uint64_t count_powerful(uint64_t limit) {
  if (limit < 1) throw std::domain_error("count_powerful: limit must be >= 1");
  uint64_t count = 0;
  for (uint64_t b = 1; b <= icbrt_u64(limit); ++b) {
    if (!squarefree_u64(b)) continue;
    count += isqrt_u64(limit / (b * b * b));
  }
  return count;
}

std::vector<uint64_t> enumerate_k_powerful(uint64_t limit, unsigned long k) {
  if (limit < 1) throw std::domain_error("enumerate_k_powerful: limit must be >= 1");
  if (k < 2) throw std::domain_error("enumerate_k_powerful: k must be >= 2");
  // DFS over primes p with p^k <= limit; at each prime pick exponent 0 or >= k.
  uint64_t root = static_cast<uint64_t>(std::pow(static_cast<double>(limit),
                                                 1.0 / static_cast<double>(k)));
  auto pow_fits = [&](uint64_t p) {
    uint64_t acc = 1;
    for (unsigned long i = 0; i < k; ++i) {
      if (acc > limit / p) return false;
      acc *= p;
    }
    return acc <= limit;
  };
  while (root > 1 && !pow_fits(root)) --root;
  while (pow_fits(root + 1)) ++root;
  const std::vector<uint32_t> primes = arith::primes_up_to(root);

  std::vector<uint64_t> out{1};
  auto dfs = [&](auto&& self, size_t idx, uint64_t acc) -> void {
    for (size_t i = idx; i < primes.size(); ++i) {
      const uint64_t p = primes[i];
      uint64_t v = acc;
      bool fits = true;
      for (unsigned long j = 0; j < k; ++j) {
        if (v > limit / p) {
          fits = false;
          break;
        }
        v *= p;
      }
      if (!fits) break;  // primes ascend, nothing further fits either
      while (true) {
        out.push_back(v);
        self(self, i + 1, v);
        if (v > limit / p) break;
        v *= p;
      }
    }
  };
  dfs(dfs, 0, 1);
  std::sort(out.begin(), out.end());
  return out;
}

bool radical_dominated(const mpz_class& x, const arith::EffortBudget& effort) {
  if (x < 1) throw std::domain_error("radical_dominated: argument must be >= 1");
  const mpz_class r = arith::radical_exact(x, effort);
  return r * r <= x;
}

}  // namespace pownum::powerful
