#include "pownum/ap.hpp"

#include <algorithm>
#include <set>

#include "pownum/powerful.hpp"

namespace pownum::ap {

void validate(const ApConfig& cfg) {
  if (cfg.a < 1 || cfg.d < 1)
    throw std::domain_error("ap: first term and difference must be >= 1");
  mpz_class g = arith::gcd(mpz_class(static_cast<unsigned long>(cfg.a)),
                           mpz_class(static_cast<unsigned long>(cfg.d)));
  if (g != 1) throw std::domain_error("ap: progression must be coprime, gcd(a, d) = 1");
}

std::vector<uint64_t> runs_among(const std::vector<uint64_t>& powerful_sorted,
                                 const ApConfig& cfg, uint64_t lo, uint64_t hi,
                                 unsigned run_len) {
  std::vector<uint64_t> out;
  auto member = [&](uint64_t v) {
    return std::binary_search(powerful_sorted.begin(), powerful_sorted.end(), v);
  };
  auto from = std::lower_bound(powerful_sorted.begin(), powerful_sorted.end(),
                               std::max(lo, cfg.a));
  for (auto it = from; it != powerful_sorted.end() && *it <= hi; ++it) {
    const uint64_t v = *it;
    if ((v - cfg.a) % cfg.d != 0) continue;
    bool run = true;
    for (unsigned i = 1; i < run_len; ++i) {
      if (!member(v + i * static_cast<uint64_t>(cfg.d))) {
        run = false;
        break;
      }
    }
    if (run) out.push_back(v);
  }
  return out;
}

std::vector<uint64_t> ap_powerful_runs(const ApConfig& cfg, uint64_t value_limit,
                                       unsigned run_len) {
  validate(cfg);
  if (run_len < 1 || run_len > 3)
    throw std::domain_error("ap_powerful_runs: run length must be 1, 2 or 3");
  if (value_limit < cfg.a) return {};
  const uint64_t reach = value_limit + (run_len - 1) * cfg.d;
  if (reach < value_limit) throw std::domain_error("ap_powerful_runs: range overflow");
  const std::vector<uint64_t> pow = powerful::enumerate_powerful(reach);
  return runs_among(pow, cfg, cfg.a, value_limit, run_len);
}

InequalityReport theorem_chain_check(const mpz_class& a_k, const mpz_class& a_k1,
                                     const mpz_class& a_k2, const mpz_class& d,
                                     const arith::EffortBudget& effort) {
  if (a_k < 1 || d < 1)
    throw std::domain_error("theorem_chain_check: terms and d must be >= 1");
  if (a_k1 != a_k + d || a_k2 != a_k1 + d)
    throw std::domain_error(
        "theorem_chain_check: inputs do not form an arithmetic progression with "
        "difference d");

  InequalityReport rep;
  rep.identity_ok = a_k * a_k2 == a_k1 * a_k1 - d * d;

  const mpz_class rad_d = arith::radical_exact(d, effort);
  mpz_class n5;
  mpz_pow_ui(n5.get_mpz_t(), rad_d.get_mpz_t(), 5);
  rep.premise_ok = a_k > n5;

  auto certified_powerful = [&](const mpz_class& v) {
    const powerful::PowerfulVerdict verdict = powerful::powerful_verdict(v, effort);
    if (verdict.status == powerful::Status::Undecided)
      throw UndecidedError("theorem_chain_check: powerfulness undecided",
                           verdict.residual_cofactor);
    return verdict.status == powerful::Status::Powerful;
  };
  rep.powerful_ok =
      certified_powerful(a_k) && certified_powerful(a_k1) && certified_powerful(a_k2);

  // rad(d^2 a_k a_k1^2 a_k2) over the union of the four prime sets.
  std::set<mpz_class> primes;
  for (const mpz_class* v : {&d, &a_k, &a_k1, &a_k2}) {
    const arith::FactorResult f = arith::factorize(*v, effort);
    if (!f.complete())
      throw UndecidedError("theorem_chain_check: radical undecided", f.cofactor);
    for (const auto& pp : f.factorization.factors) primes.insert(pp.prime);
  }
  mpz_class rad_abc = 1;
  for (const auto& p : primes) rad_abc *= p;

  mpz_pow_ui(rep.lhs.get_mpz_t(), rad_abc.get_mpz_t(), 7);
  mpz_pow_ui(rep.rhs.get_mpz_t(), a_k1.get_mpz_t(), 12);
  rep.chain_ok = rep.lhs < rep.rhs;
  return rep;
}

}  // namespace pownum::ap
