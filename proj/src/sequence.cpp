#include "pownum/sequence.hpp"

#include <algorithm>

namespace pownum::seq {

namespace {

bool fits_u64(const mpz_class& n) {
  return n >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

// x = (n!)^r exactly: exponents are r * legendre(n, p), no factoring needed.
powerful::PowerfulVerdict verdict_at_offset_zero(uint64_t n, unsigned long r) {
  powerful::PowerfulVerdict v;
  if (n <= 1) {
    v.status = powerful::Status::Powerful;
    return v;
  }
  arith::Factorization cert;
  for (uint32_t p : arith::primes_up_to(n)) {
    const uint64_t e = r * legendre_exponent(n, p);
    if (e == 1) {
      v.status = powerful::Status::NotPowerful;
      v.witness_prime = static_cast<unsigned long>(p);
      return v;
    }
    cert.factors.push_back(
        arith::PrimePower{mpz_class(static_cast<unsigned long>(p)),
                          static_cast<unsigned long>(e)});
  }
  v.status = powerful::Status::Powerful;
  v.certificate = std::move(cert);
  return v;
}

powerful::PowerfulVerdict near_factorial_verdict(uint64_t n, unsigned long r,
                                                 int64_t offset, const mpz_class& x,
                                                 const arith::EffortBudget& effort) {
  if (offset == 0) return verdict_at_offset_zero(n, r);
  if (fits_u64(x) || effort.trial_division_bound > 1'000'000)
    return powerful::powerful_verdict(x, effort);

  const uint64_t j = offset < 0 ? static_cast<uint64_t>(-offset)
                                : static_cast<uint64_t>(offset);
  arith::FactorResult res;
  mpz_class rem = x;
  for (uint32_t p : arith::small_primes()) {
    if (p > effort.trial_division_bound) break;
    // p <= n divides x = (n!)^r + offset iff p divides the offset.
    if (p <= n && j % p != 0) continue;
    if (mpz_cmp_ui(rem.get_mpz_t(), static_cast<unsigned long>(p) * p) < 0) break;
    if (!mpz_divisible_ui_p(rem.get_mpz_t(), p)) continue;
    mpz_class pz(static_cast<unsigned long>(p));
    const unsigned long e =
        mpz_remove(rem.get_mpz_t(), rem.get_mpz_t(), pz.get_mpz_t());
    if (e == 1) {
      powerful::PowerfulVerdict v;
      v.status = powerful::Status::NotPowerful;
      v.witness_prime = std::move(pz);
      return v;
    }
    res.factorization.factors.push_back(arith::PrimePower{std::move(pz), e});
  }
  if (rem > 1) {
    arith::FactorResult tail = arith::factorize_rough(rem, effort);
    for (auto& pp : tail.factorization.factors)
      res.factorization.factors.push_back(std::move(pp));
    res.cofactor = tail.cofactor;
  }
  std::sort(res.factorization.factors.begin(), res.factorization.factors.end(),
            [](const arith::PrimePower& a, const arith::PrimePower& b) {
              return a.prime < b.prime;
            });
  return powerful::classify_factor_result(res);
}

}  // namespace

uint64_t legendre_exponent(uint64_t n, uint64_t p) {
  if (p < 2) throw std::domain_error("legendre_exponent: p must be prime");
  uint64_t e = 0;
  uint64_t q = p;
  for (;;) {
    e += n / q;
    if (q > n / p) break;  // next power would exceed n
    q *= p;
  }
  return e;
}

std::vector<NeighborhoodHit> factorial_neighborhood_range(
    uint64_t n_lo, uint64_t n_hi, uint64_t k, unsigned long r,
    const arith::EffortBudget& effort) {
  if (n_lo < 1 || r < 1) throw std::domain_error("factorial_neighborhood: n, r >= 1");
  std::vector<NeighborhoodHit> out;
  mpz_class f = arith::factorial(n_lo - 1);
  for (uint64_t n = n_lo; n <= n_hi; ++n) {
    f *= n;
    mpz_class fr;
    mpz_pow_ui(fr.get_mpz_t(), f.get_mpz_t(), r);
    for (int64_t offset = -static_cast<int64_t>(k);
         offset <= static_cast<int64_t>(k); ++offset) {
      mpz_class x = offset >= 0 ? mpz_class(fr + static_cast<unsigned long>(offset))
                                : mpz_class(fr - static_cast<unsigned long>(-offset));
      if (x < 1) continue;
      powerful::PowerfulVerdict v = near_factorial_verdict(n, r, offset, x, effort);
      if (v.status == powerful::Status::NotPowerful) continue;
      out.push_back(NeighborhoodHit{n, r, offset, std::move(x), std::move(v)});
    }
  }
  return out;
}

std::vector<NeighborhoodHit> factorial_neighborhood_search(
    uint64_t n_max, uint64_t k, unsigned long r, const arith::EffortBudget& effort) {
  return factorial_neighborhood_range(1, n_max, k, r, effort);
}

std::vector<uint64_t> factorial_powerful_scan_range(uint64_t n_lo, uint64_t n_hi) {
  if (n_lo < 1) throw std::domain_error("factorial_powerful_scan: n must be >= 1");
  std::vector<uint64_t> out;
  if (n_lo > n_hi) return out;
  const std::vector<uint32_t> primes = arith::primes_up_to(n_hi);
  size_t idx = 0;  // index of largest prime <= n, maintained incrementally
  while (idx + 1 < primes.size() && primes[idx + 1] <= n_lo) ++idx;
  for (uint64_t n = n_lo; n <= n_hi; ++n) {
    while (idx + 1 < primes.size() && primes[idx + 1] <= n) ++idx;
    if (n == 1) {
      out.push_back(1);  // 1! = 1, vacuously powerful
      continue;
    }
    const uint64_t p = primes[idx];
    if (2 * p > n) continue;  // exponent of p in n! is exactly 1
    // Unreachable for n >= 2 by Bertrand's postulate, but decide honestly.
    bool powerful_factorial = true;
    for (uint32_t q : primes) {
      if (q > n) break;
      if (legendre_exponent(n, q) == 1) {
        powerful_factorial = false;
        break;
      }
    }
    if (powerful_factorial) out.push_back(n);
  }
  return out;
}

std::vector<uint64_t> factorial_powerful_scan(uint64_t n_max) {
  return factorial_powerful_scan_range(1, n_max);
}

std::vector<BrocardHit> brocard_range(uint64_t n_lo, uint64_t n_hi,
                                      const mpz_class& k) {
  if (n_lo < 1) throw std::domain_error("brocard_search: n must be >= 1");
  std::vector<BrocardHit> out;
  if (n_lo > n_hi) return out;
  mpz_class f = arith::factorial(n_lo - 1);
  for (uint64_t n = n_lo; n <= n_hi; ++n) {
    f *= n;
    const mpz_class t = f + k;
    if (t < 0) continue;
    if (mpz_perfect_square_p(t.get_mpz_t())) out.push_back(BrocardHit{n, arith::isqrt(t)});
  }
  return out;
}

std::vector<BrocardHit> brocard_search(uint64_t n_max, const mpz_class& k) {
  return brocard_range(1, n_max, k);
}

std::vector<Pow2Hit> pow2_plus_one_range(uint64_t n_lo, uint64_t n_hi,
                                         const arith::EffortBudget& effort) {
  if (n_lo < 1) throw std::domain_error("pow2_plus_one: n must be >= 1");
  std::vector<Pow2Hit> out;
  if (n_lo > n_hi) return out;
  mpz_class pow2 = 1;
  pow2 <<= n_lo;
  for (uint64_t n = n_lo; n <= n_hi; ++n, pow2 <<= 1) {
    mpz_class x = pow2 + 1;
    powerful::PowerfulVerdict v = powerful::powerful_verdict(x, effort);
    if (v.status == powerful::Status::NotPowerful) continue;
    out.push_back(Pow2Hit{n, std::move(x), std::move(v)});
  }
  return out;
}

std::vector<Pow2Hit> pow2_plus_one_search(uint64_t n_max,
                                          const arith::EffortBudget& effort) {
  return pow2_plus_one_range(1, n_max, effort);
}

}  // namespace pownum::seq
