#pragma once

#include <span>
#include <vector>

#include "dirlab/prime_index.hpp"
#include "dirlab/series.hpp"

namespace dirlab {

// Power-series side of the Bohr transform: sparse map alpha -> coefficient.
struct TorusPolynomial {
  CoefficientSpaceSpec space;
  std::uint32_t var_count = 0; // smallest N with all indices in N variables
  std::vector<std::pair<MultiIndex, Coefficient>> terms; // sorted by index

  void set(const MultiIndex& alpha, Coefficient c);
  const Coefficient* find(const MultiIndex& alpha) const;
};

// a_{p^alpha} = c_alpha in both directions
TorusPolynomial bohr_lift(const DirichletTruncation& D, const PrimeTable& primes);
DirichletTruncation bohr_project(const TorusPolynomial& Q, const PrimeTable& primes);

struct RadiusVector {
  std::vector<double> radii; // each in [0, 1)
};

// coefficient at alpha multiplied by r^alpha
TorusPolynomial apply_Tr(const TorusPolynomial& Q, const RadiusVector& r);

// multiplier lambda_n = n^{-eps}, routed through the lift:
// B o T_r o B^{-1} with r_k = p_k^{-eps}
DirichletTruncation apply_M_eps(const DirichletTruncation& D, double eps,
                                const PrimeTable& primes);

// Dirichlet convolution of two scalar truncations, cut at n_max
DirichletTruncation dirichlet_product(const DirichletTruncation& A,
                                      const DirichletTruncation& B,
                                      std::uint64_t n_max);

// --- evaluation engine ------------------------------------------------------

// Factorizes a truncation's support once and evaluates the monomial values
// w^{alpha(n)} of the Bohr lift at torus points. Variables are compacted to
// the distinct primes that actually divide the support.
class LiftEvaluator {
public:
  struct TermFactor {
    std::uint32_t var; // position into used_primes()
    std::uint32_t exp;
  };

  LiftEvaluator(const DirichletTruncation& D, const PrimeTable& primes);

  std::size_t terms() const { return n_.size(); }
  const std::vector<std::uint64_t>& support_n() const { return n_; }
  std::span<const double> log_n() const { return log_n_; }

  // number of distinct primes dividing the support
  std::uint32_t torus_dim() const { return static_cast<std::uint32_t>(used_primes_.size()); }
  const std::vector<std::uint64_t>& used_primes() const { return used_primes_; }
  std::span<const TermFactor> term_factors(std::size_t k) const;
  std::uint32_t max_exponent(std::uint32_t var) const { return max_exp_[var]; }

  // out[k] = w^{alpha(n_k)} at w_j = e^{i theta_j}; theta has torus_dim entries
  void term_values(std::span<const double> theta, std::vector<cplx>& out) const;

  // torus point of the Kronecker line: theta_j = -t log(used prime j) mod 2pi
  std::vector<double> line_point(double t) const;

private:
  std::vector<std::uint64_t> n_;
  std::vector<double> log_n_;
  std::vector<std::uint64_t> used_primes_;
  std::vector<double> log_used_primes_;
  std::vector<TermFactor> factors_;
  std::vector<std::uint32_t> factor_begin_; // CSR offsets, terms()+1 entries
  std::vector<std::uint32_t> max_exp_;
};

} // namespace dirlab
