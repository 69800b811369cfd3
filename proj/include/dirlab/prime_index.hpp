#pragma once

#include <cstdint>
#include <vector>

namespace dirlab {

// Finite multi-index alpha = (alpha_1, ..., alpha_N), the exponent tuple of
// n = 2^{alpha_1} 3^{alpha_2} 5^{alpha_3} ... Canonical form keeps the
// trailing entry nonzero so equality is structural.
struct MultiIndex {
  std::vector<std::uint32_t> exponents;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::uint32_t> e) : exponents(std::move(e)) { trim(); }

  void trim() {
    while (!exponents.empty() && exponents.back() == 0) exponents.pop_back();
  }
  std::size_t size() const { return exponents.size(); }
  bool empty() const { return exponents.empty(); }
  std::uint64_t degree() const {
    std::uint64_t d = 0;
    for (auto e : exponents) d += e;
    return d;
  }
  bool operator==(const MultiIndex&) const = default;
  bool operator<(const MultiIndex& o) const { return exponents < o.exponents; }
};

// Ascending primes up to a fixed bound, sieved once at construction and
// immutable afterwards; safe to share across concurrent estimator jobs.
class PrimeTable {
public:
  explicit PrimeTable(std::uint64_t bound = 10'000'000);

  std::uint64_t bound() const { return bound_; }
  std::size_t size() const { return primes_.size(); }
  const std::vector<std::uint64_t>& primes() const { return primes_; }

  // k-th prime, 1-based: nth_prime(1) == 2. Throws std::length_error past
  // the table capacity (no silent regrowth).
  std::uint64_t nth_prime(std::size_t k) const;

  // 1-based table index of p, or 0 when p is not a prime in the table.
  std::size_t index_of(std::uint64_t p) const;

  // n = p^alpha -> alpha. Trial division against the table; a factor beyond
  // the table bound raises std::length_error ("prime table too small").
  MultiIndex factorize(std::uint64_t n) const;

  // alpha -> p^alpha, with overflow detection.
  std::uint64_t compose(const MultiIndex& alpha) const;

  // Omega(n): number of prime divisors counted with multiplicity.
  std::uint64_t omega(std::uint64_t n) const;

private:
  std::uint64_t bound_;
  std::vector<std::uint64_t> primes_;
};

} // namespace dirlab
