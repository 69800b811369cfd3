#include "dirlab/prime_index.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dirlab {

PrimeTable::PrimeTable(std::uint64_t bound) : bound_(bound) {
  if (bound_ < 2) bound_ = 2;
  std::vector<bool> composite(bound_ + 1, false);
  for (std::uint64_t p = 2; p * p <= bound_; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = p * p; m <= bound_; m += p) composite[m] = true;
  }
  for (std::uint64_t p = 2; p <= bound_; ++p)
    if (!composite[p]) primes_.push_back(p);
}

std::uint64_t PrimeTable::nth_prime(std::size_t k) const {
  if (k == 0 || k > primes_.size())
    throw std::length_error("prime table too small: requested prime #" + std::to_string(k) +
                            " of " + std::to_string(primes_.size()));
  return primes_[k - 1];
}

std::size_t PrimeTable::index_of(std::uint64_t p) const {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) return 0;
  return static_cast<std::size_t>(it - primes_.begin()) + 1;
}

MultiIndex PrimeTable::factorize(std::uint64_t n) const {
  if (n == 0) throw std::domain_error("factorize: n must be >= 1");
  std::vector<std::uint32_t> exp;
  std::uint64_t r = n;
  for (std::size_t i = 0; i < primes_.size() && r > 1; ++i) {
    const std::uint64_t p = primes_[i];
    if (p * p > r) break;
    if (r % p) continue;
    std::uint32_t e = 0;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    if (exp.size() <= i) exp.resize(i + 1, 0);
    exp[i] = e;
  }
  if (r > 1) {
    // leftover cofactor is prime iff it sits in the table
    const std::size_t idx = index_of(r);
    if (idx == 0)
      throw std::length_error("prime table too small: factor " + std::to_string(r) +
                              " of " + std::to_string(n) + " exceeds bound " +
                              std::to_string(bound_));
    if (exp.size() < idx) exp.resize(idx, 0);
    exp[idx - 1] += 1;
  }
  return MultiIndex{std::move(exp)};
}

std::uint64_t PrimeTable::compose(const MultiIndex& alpha) const {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < alpha.exponents.size(); ++i) {
    const std::uint64_t p = nth_prime(i + 1);
    for (std::uint32_t e = 0; e < alpha.exponents[i]; ++e) {
      std::uint64_t next;
      if (__builtin_mul_overflow(n, p, &next))
        throw std::overflow_error("compose: p^alpha overflows 64 bits");
      n = next;
    }
  }
  return n;
}

std::uint64_t PrimeTable::omega(std::uint64_t n) const {
  if (n == 0) throw std::domain_error("omega: n must be >= 1");
  std::uint64_t count = 0;
  std::uint64_t r = n;
  for (std::size_t i = 0; i < primes_.size() && r > 1; ++i) {
    const std::uint64_t p = primes_[i];
    if (p * p > r) break;
    while (r % p == 0) {
      r /= p;
      ++count;
    }
  }
  if (r > 1) {
    if (index_of(r) == 0)
      throw std::length_error("prime table too small: factor " + std::to_string(r) +
                              " exceeds bound " + std::to_string(bound_));
    ++count;
  }
  return count;
}

} // namespace dirlab
