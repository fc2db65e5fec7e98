#include "pownum/additive.hpp"

#include <algorithm>
#include <numeric>

namespace pownum::additive {

std::vector<PowerfulSumTriple> sums_in_z_range(const std::vector<uint64_t>& kpowerful,
                                               uint64_t z_lo, uint64_t z_hi,
                                               unsigned long k) {
  std::vector<PowerfulSumTriple> out;
  auto member = [&](uint64_t v) {
    return std::binary_search(kpowerful.begin(), kpowerful.end(), v);
  };
  auto zi = std::lower_bound(kpowerful.begin(), kpowerful.end(), std::max<uint64_t>(z_lo, 2));
  for (; zi != kpowerful.end() && *zi <= z_hi; ++zi) {
    const uint64_t z = *zi;
    for (auto xi = kpowerful.begin(); xi != kpowerful.end() && *xi <= z / 2; ++xi) {
      const uint64_t x = *xi;
      const uint64_t y = z - x;
      if (std::gcd(x, y) != 1) continue;
      if (!member(y)) continue;
      out.push_back(PowerfulSumTriple{x, y, z, k});
    }
  }
  return out;
}

std::vector<PowerfulSumTriple> powerful_sum_search(uint64_t z_max, unsigned long k) {
  if (z_max < 2) throw std::domain_error("powerful_sum_search: z_max must be >= 2");
  if (k < 2) throw std::domain_error("powerful_sum_search: k must be >= 2");
  const std::vector<uint64_t> pool = k == 2 ? powerful::enumerate_powerful(z_max)
                                            : powerful::enumerate_k_powerful(z_max, k);
  return sums_in_z_range(pool, 2, z_max, k);
}

std::vector<PowerSumHit> power_sum_range(unsigned long n, uint64_t x_lo, uint64_t x_hi,
                                         uint64_t base_max,
                                         const arith::EffortBudget& effort) {
  if (n < 2) throw std::domain_error("power_sum: exponent must be >= 2");
  std::vector<PowerSumHit> out;
  mpz_class xn, yn;
  for (uint64_t x = std::max<uint64_t>(x_lo, 1); x <= std::min(x_hi, base_max); ++x) {
    mpz_ui_pow_ui(xn.get_mpz_t(), x, n);
    for (uint64_t y = x; y <= base_max; ++y) {
      if (std::gcd(x, y) != 1) continue;
      mpz_ui_pow_ui(yn.get_mpz_t(), y, n);
      mpz_class s = xn + yn;
      powerful::PowerfulVerdict v = powerful::powerful_verdict(s, effort);
      if (v.status == powerful::Status::NotPowerful) continue;
      out.push_back(PowerSumHit{x, y, std::move(s), std::move(v)});
    }
  }
  return out;
}

std::vector<PowerSumHit> power_sum_powerful_scan(unsigned long n, uint64_t base_max,
                                                 const arith::EffortBudget& effort) {
  if (base_max < 1) throw std::domain_error("power_sum: base_max must be >= 1");
  return power_sum_range(n, 1, base_max, base_max, effort);
}

}  // namespace pownum::additive
