#include "pownum/arith.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <optional>

namespace pownum::arith {

namespace {

constexpr uint64_t kSieveCap = 1'000'000'000;
constexpr uint64_t kSmallPrimeBound = 1'000'000;
// Trial bounds above this would overflow p*p in 64 bits.
constexpr uint64_t kTrialBoundCap = 1'000'000'000;

uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t x = 1;
  a %= m;
  while (e > 0) {
    if (e & 1) x = mulmod(x, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return x;
}

// Brent's variant; keeps trying fresh parameters until a proper divisor
// appears. Only called on odd composites.
uint64_t brent_rho_u64(uint64_t n, uint64_t seed) {
  if (n % 2 == 0) return 2;
  uint64_t state = seed ^ n;
  for (;;) {
    uint64_t y = splitmix64(state) % (n - 3) + 2;
    uint64_t c = splitmix64(state) % (n - 2) + 1;
    uint64_t g = 1, r = 1, q = 1, x = 0, ys = 0;
    while (g == 1) {
      x = y;
      for (uint64_t i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
      for (uint64_t k = 0; k < r && g == 1; k += 128) {
        ys = y;
        const uint64_t lim = std::min<uint64_t>(128, r - k);
        for (uint64_t i = 0; i < lim; ++i) {
          y = (mulmod(y, y, n) + c) % n;
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      do {
        ys = (mulmod(ys, ys, n) + c) % n;
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

bool fits_u64(const mpz_class& n) {
  return n >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

uint64_t to_u64(const mpz_class& n) {
  uint64_t lo = mpz_get_ui(n.get_mpz_t());
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 64) throw std::overflow_error("to_u64");
  // mpz_get_ui already returns the low 64 bits on LP64.
  return lo;
}

void push_factor(std::vector<PrimePower>& out, mpz_class p, unsigned long e) {
  out.push_back(PrimePower{std::move(p), e});
}

void sort_and_merge(std::vector<PrimePower>& fs) {
  std::sort(fs.begin(), fs.end(), [](const PrimePower& a, const PrimePower& b) {
    return a.prime < b.prime;
  });
  std::vector<PrimePower> merged;
  merged.reserve(fs.size());
  for (auto& pp : fs) {
    if (!merged.empty() && merged.back().prime == pp.prime)
      merged.back().exponent += pp.exponent;
    else
      merged.push_back(std::move(pp));
  }
  fs = std::move(merged);
}

// Smallest exponent e >= 2 with n = r^e, if any.
std::optional<std::pair<mpz_class, unsigned long>> perfect_power(const mpz_class& n) {
  if (n < 4 || mpz_perfect_power_p(n.get_mpz_t()) == 0) return std::nullopt;
  const unsigned long bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  mpz_class root;
  for (unsigned long e = 2; e <= bits; ++e) {
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0)
      return std::make_pair(root, e);
  }
  return std::nullopt;  // not reached for n >= 4
}

// Miller-Rabin witnesses 2..41: deterministic below this bound
// (Sorenson & Webster), used as the documented exactness threshold.
const mpz_class& mr_exact_bound() {
  static const mpz_class bound("3317044064679887385961981");
  return bound;
}

constexpr uint64_t kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

bool miller_rabin(const mpz_class& n, const mpz_class& base) {
  // n odd, n > 3, 1 < base < n - 1 assumed.
  mpz_class d = n - 1;
  const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  mpz_class x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n - 1) return true;
    if (x == 1) return false;
  }
  return false;
}

mpz_class half_mod(const mpz_class& x, const mpz_class& n) {
  // n odd; x may be negative
  mpz_class t;
  mpz_mod(t.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
  if (mpz_odd_p(t.get_mpz_t())) t += n;
  t >>= 1;
  return t;
}

// Strong Lucas test with Selfridge's parameters. n odd, n > 3, not a square.
bool strong_lucas(const mpz_class& n) {
  long d_small = 5;
  mpz_class D;
  for (;;) {
    D = d_small;
    const int j = mpz_jacobi(D.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0) return n == (d_small < 0 ? -d_small : d_small);
    d_small = d_small > 0 ? -(d_small + 2) : -(d_small - 2);
  }
  const mpz_class Q = (1 - D) / 4;

  mpz_class delta = n + 1;
  const unsigned long s = mpz_scan1(delta.get_mpz_t(), 0);
  mpz_class d = delta >> s;

  // Compute U_d, V_d mod n with the binary chain (P = 1).
  mpz_class U = 1, V = 1, Qk = Q % n;
  if (Qk < 0) Qk += n;
  const unsigned long bits = mpz_sizeinbase(d.get_mpz_t(), 2);
  for (long i = static_cast<long>(bits) - 2; i >= 0; --i) {
    U = U * V % n;
    V = (V * V - 2 * Qk) % n;
    Qk = Qk * Qk % n;
    if (mpz_tstbit(d.get_mpz_t(), static_cast<unsigned long>(i))) {
      const mpz_class u2 = half_mod(U + V, n);
      V = half_mod(D * U + V, n);
      U = u2;
      Qk = Qk * Q % n;
    }
    if (U < 0) U += n;
    if (V < 0) V += n;
    if (Qk < 0) Qk += n;
  }
  if (U == 0 || V == 0) return true;
  for (unsigned long r = 1; r < s; ++r) {
    V = (V * V - 2 * Qk) % n;
    if (V < 0) V += n;
    if (V == 0) return true;
    Qk = Qk * Qk % n;
  }
  return false;
}

// Brent rho on mpz with a hard iteration budget shared across restarts.
// Returns a proper divisor, or nullopt once the budget is exhausted.
std::optional<mpz_class> brent_rho_mpz(const mpz_class& n, uint64_t& state,
                                       uint64_t& budget) {
  if (mpz_even_p(n.get_mpz_t())) return mpz_class(2);
  mpz_class x, y, ys, q, g, diff;
  while (budget > 0) {
    y = splitmix64(state);
    y %= n;
    const uint64_t c64 = splitmix64(state) % 1024 + 1;
    const mpz_class c(static_cast<unsigned long>(c64));
    g = 1;
    q = 1;
    uint64_t r = 1;
    bool out_of_budget = false;
    while (g == 1 && !out_of_budget) {
      x = y;
      for (uint64_t i = 0; i < r && budget > 0; ++i) {
        y = (y * y + c) % n;
        --budget;
      }
      if (budget == 0) {
        out_of_budget = true;
        break;
      }
      for (uint64_t k = 0; k < r && g == 1; k += 128) {
        ys = y;
        const uint64_t lim = std::min<uint64_t>(128, r - k);
        for (uint64_t i = 0; i < lim; ++i) {
          if (budget == 0) {
            out_of_budget = true;
            break;
          }
          y = (y * y + c) % n;
          --budget;
          diff = x > y ? x - y : y - x;
          q = q * diff % n;
        }
        g = gcd(q, n);
        if (out_of_budget) break;
      }
      r <<= 1;
    }
    if (out_of_budget && g == 1) return std::nullopt;
    if (g == n) {
      do {
        ys = (ys * ys + c) % n;
        diff = x > ys ? x - ys : ys - x;
        g = gcd(diff, n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
    // Unlucky cycle; retry with new parameters while budget remains.
  }
  return std::nullopt;
}

struct Chunk {
  mpz_class value;
  unsigned long mult;
};

// Shared tail of factorize(): n has no prime factor <= bound.
void hard_phase(const mpz_class& n, const EffortBudget& effort,
                std::vector<PrimePower>& out, mpz_class& cofactor) {
  uint64_t budget = effort.rho_iteration_budget;
  uint64_t state = effort.rng_seed;
  std::vector<Chunk> work{{n, 1}};
  std::vector<Chunk> stuck;
  std::vector<PrimePower> found;

  auto reduce_by_found = [&](Chunk& ch) {
    for (auto& pp : found) {
      if (ch.value == 1) break;
      const unsigned long e =
          mpz_remove(ch.value.get_mpz_t(), ch.value.get_mpz_t(), pp.prime.get_mpz_t());
      pp.exponent += e * ch.mult;
    }
  };

  auto settle = [&](Chunk ch) -> bool {
    // Returns true if the chunk was fully handled.
    reduce_by_found(ch);
    if (ch.value == 1) return true;
    if (fits_u64(ch.value)) {
      for (auto& [p, e] : factor_u64(to_u64(ch.value), 2, effort.rng_seed))
        push_factor(found, mpz_class(static_cast<unsigned long>(p)), e * ch.mult);
      return true;
    }
    if (is_prime(ch.value)) {
      push_factor(found, ch.value, ch.mult);
      return true;
    }
    if (auto pp = perfect_power(ch.value)) {
      work.push_back(Chunk{pp->first, ch.mult * pp->second});
      return true;
    }
    if (budget > 0) {
      if (auto d = brent_rho_mpz(ch.value, state, budget)) {
        work.push_back(Chunk{ch.value / *d, ch.mult});
        work.push_back(Chunk{*d, ch.mult});
        return true;
      }
    }
    stuck.push_back(std::move(ch));
    return false;
  };

  while (!work.empty()) {
    Chunk ch = std::move(work.back());
    work.pop_back();
    settle(std::move(ch));
  }

  // A late prime discovery can divide an earlier stuck chunk; iterate to a
  // fixed point without further rho work.
  bool changed = true;
  while (changed && !stuck.empty()) {
    changed = false;
    std::vector<Chunk> still;
    for (auto& ch : stuck) {
      reduce_by_found(ch);
      if (ch.value == 1) {
        changed = true;
        continue;
      }
      if (fits_u64(ch.value)) {
        for (auto& [p, e] : factor_u64(to_u64(ch.value), 2, effort.rng_seed))
          push_factor(found, mpz_class(static_cast<unsigned long>(p)), e * ch.mult);
        changed = true;
        continue;
      }
      if (is_prime(ch.value)) {
        push_factor(found, ch.value, ch.mult);
        changed = true;
        continue;
      }
      if (auto pp = perfect_power(ch.value)) {
        still.push_back(Chunk{pp->first, ch.mult * pp->second});
        changed = true;
        continue;
      }
      still.push_back(std::move(ch));
    }
    stuck = std::move(still);
  }

  cofactor = 1;
  for (const auto& ch : stuck) {
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), ch.value.get_mpz_t(), ch.mult);
    cofactor *= t;
  }
  for (auto& pp : found) out.push_back(std::move(pp));
}

void check_positive(const mpz_class& n, const char* who) {
  if (n < 1) throw std::domain_error(std::string(who) + ": argument must be >= 1");
}

}  // namespace

mpz_class Factorization::product() const {
  mpz_class acc = 1, t;
  for (const auto& pp : factors) {
    mpz_pow_ui(t.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    acc *= t;
  }
  return acc;
}

mpz_class Factorization::radical() const {
  mpz_class acc = 1;
  for (const auto& pp : factors) acc *= pp.prime;
  return acc;
}

unsigned long Factorization::min_exponent() const {
  unsigned long m = ULONG_MAX;
  for (const auto& pp : factors) m = std::min(m, pp.exponent);
  return m;
}

std::vector<uint32_t> primes_up_to(uint64_t limit) {
  if (limit > kSieveCap) throw std::length_error("primes_up_to: limit above 10^9");
  std::vector<uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (uint64_t i = 2; i * i <= limit; ++i) {
    if (composite[i]) continue;
    for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  for (uint64_t i = 2; i <= limit; ++i)
    if (!composite[i]) primes.push_back(static_cast<uint32_t>(i));
  return primes;
}

const std::vector<uint32_t>& small_primes() {
  static const std::vector<uint32_t> table = primes_up_to(kSmallPrimeBound);
  return table;
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  const uint64_t d0 = n - 1;
  const int s = __builtin_ctzll(d0);
  const uint64_t d = d0 >> s;
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::pair<uint64_t, unsigned long>> factor_u64(uint64_t n,
                                                           uint64_t trial_bound,
                                                           uint64_t rng_seed) {
  if (n == 0) throw std::domain_error("factor_u64: argument must be >= 1");
  std::vector<std::pair<uint64_t, unsigned long>> out;
  trial_bound = std::min(trial_bound, kTrialBoundCap);
  for (uint32_t p : small_primes()) {
    if (p > trial_bound) break;
    if (static_cast<uint64_t>(p) * p > n) break;
    if (n % p == 0) {
      unsigned long e = 0;
      do {
        n /= p;
        ++e;
      } while (n % p == 0);
      out.emplace_back(p, e);
    }
  }
  if (trial_bound > kSmallPrimeBound && n > 1) {
    // Composite candidates find nothing (their primes are already gone).
    uint64_t p = kSmallPrimeBound + 1;  // 10^6 + 1; wheel over 6k +- 1
    while (p <= trial_bound && p * p <= n) {
      if (n % p == 0) {
        unsigned long e = 0;
        do {
          n /= p;
          ++e;
        } while (n % p == 0);
        out.emplace_back(p, e);
      }
      p += (p % 6 == 1) ? 4 : 2;
    }
  }
  if (n > 1) {
    // No factor <= min(trial_bound, sqrt(n)) remains.
    std::vector<uint64_t> stack{n};
    std::vector<uint64_t> primes;
    while (!stack.empty()) {
      const uint64_t m = stack.back();
      stack.pop_back();
      if (m == 1) continue;
      if (is_prime_u64(m)) {
        primes.push_back(m);
        continue;
      }
      const uint64_t d = brent_rho_u64(m, rng_seed);
      stack.push_back(d);
      stack.push_back(m / d);
    }
    std::sort(primes.begin(), primes.end());
    for (size_t i = 0; i < primes.size();) {
      size_t j = i;
      while (j < primes.size() && primes[j] == primes[i]) ++j;
      out.emplace_back(primes[i], j - i);
      i = j;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  if (mpz_even_p(n.get_mpz_t())) return false;
  for (uint64_t b : kMrBases) {
    if (!miller_rabin(n, mpz_class(static_cast<unsigned long>(b)))) return false;
  }
  if (n < mr_exact_bound()) return true;
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;
  return strong_lucas(n);
}

FactorResult factorize_trial(const mpz_class& n, const EffortBudget& effort) {
  check_positive(n, "factorize");
  FactorResult res;
  if (n == 1) return res;
  if (fits_u64(n)) {
    // Machine-word inputs factor completely.
    for (auto& [p, e] :
         factor_u64(to_u64(n), effort.trial_division_bound, effort.rng_seed))
      push_factor(res.factorization.factors, mpz_class(static_cast<unsigned long>(p)), e);
    return res;
  }
  const uint64_t bound =
      std::max<uint64_t>(2, std::min(effort.trial_division_bound, kTrialBoundCap));
  mpz_class rem = n;
  bool rem_is_prime = false;
  for (uint32_t p : small_primes()) {
    if (p > bound) break;
    if (mpz_cmp_ui(rem.get_mpz_t(), static_cast<unsigned long>(p) * p) < 0) {
      rem_is_prime = rem > 1;
      break;
    }
    if (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
      unsigned long e = 0;
      do {
        mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(rem.get_mpz_t(), p));
      push_factor(res.factorization.factors, mpz_class(static_cast<unsigned long>(p)), e);
    }
  }
  if (!rem_is_prime && bound > kSmallPrimeBound && rem > 1) {
    uint64_t p = kSmallPrimeBound + 1;
    while (p <= bound) {
      if (mpz_cmp_ui(rem.get_mpz_t(), p * p) < 0) {
        rem_is_prime = rem > 1;
        break;
      }
      if (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
        unsigned long e = 0;
        do {
          mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
          ++e;
        } while (mpz_divisible_ui_p(rem.get_mpz_t(), p));
        push_factor(res.factorization.factors, mpz_class(p), e);
      }
      p += (p % 6 == 1) ? 4 : 2;
    }
  }
  if (rem > 1) {
    // Smallest possible factor of rem now exceeds the bound, so anything
    // below bound^2 must be prime.
    mpz_class bound2;
    mpz_ui_pow_ui(bound2.get_mpz_t(), bound, 2);
    if (rem_is_prime || rem < bound2 || is_prime(rem)) {
      push_factor(res.factorization.factors, rem, 1);
    } else {
      res.cofactor = rem;
    }
  }
  sort_and_merge(res.factorization.factors);
  return res;
}

FactorResult factorize_rough(const mpz_class& n, const EffortBudget& effort) {
  check_positive(n, "factorize_rough");
  FactorResult res;
  if (n == 1) return res;
  if (fits_u64(n)) {
    for (auto& [p, e] : factor_u64(to_u64(n), 2, effort.rng_seed))
      push_factor(res.factorization.factors, mpz_class(static_cast<unsigned long>(p)), e);
    return res;
  }
  if (is_prime(n)) {
    push_factor(res.factorization.factors, n, 1);
    return res;
  }
  hard_phase(n, effort, res.factorization.factors, res.cofactor);
  sort_and_merge(res.factorization.factors);
  return res;
}

FactorResult factorize(const mpz_class& n, const EffortBudget& effort) {
  FactorResult res = factorize_trial(n, effort);
  if (res.complete()) return res;
  const mpz_class rem = res.cofactor;
  res.cofactor = 1;
  FactorResult tail = factorize_rough(rem, effort);
  for (auto& pp : tail.factorization.factors)
    res.factorization.factors.push_back(std::move(pp));
  res.cofactor = tail.cofactor;
  sort_and_merge(res.factorization.factors);
  return res;
}

mpz_class gcd(const mpz_class& a, const mpz_class& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

mpz_class isqrt(const mpz_class& n) {
  if (n < 0) throw std::domain_error("isqrt: argument must be >= 0");
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

RadicalResult radical(const mpz_class& n, const EffortBudget& effort) {
  check_positive(n, "radical");
  const FactorResult f = factorize(n, effort);
  RadicalResult res;
  res.value = f.factorization.radical();
  res.cofactor = f.cofactor;
  return res;
}

mpz_class radical_exact(const mpz_class& n, const EffortBudget& effort) {
  RadicalResult r = radical(n, effort);
  if (!r.complete())
    throw UndecidedError("radical: cofactor resisted the effort budget", r.cofactor);
  return r.value;
}

mpz_class primorial(unsigned long x) {
  mpz_class acc = 1;
  uint64_t batch = 1;
  for (uint32_t p : primes_up_to(x)) {
    if (batch > UINT64_MAX / p) {
      acc *= mpz_class(batch);
      batch = 1;
    }
    batch *= p;
  }
  if (batch > 1) acc *= mpz_class(batch);
  return acc;
}

mpz_class radical_of_factorial(unsigned long n) { return primorial(n); }

mpz_class factorial(unsigned long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

}  // namespace pownum::arith
