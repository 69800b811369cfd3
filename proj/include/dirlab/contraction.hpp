#pragma once

#include <cstdint>
#include <vector>

#include "dirlab/norms.hpp"
#include "dirlab/prime_index.hpp"
#include "dirlab/series.hpp"

namespace dirlab {

// One-variable Hardy norm of f(z) = sum_k coeffs[k] z^k: Monte Carlo on the
// circle, exact Parseval when p = 2.
McEstimate one_var_hp_norm(std::span<const cplx> coeffs, double p,
                           std::uint32_t mc_samples, std::uint64_t seed);

struct RatioEstimate {
  double value = 0.0;
  double std_error = 0.0; // combined (delta method) error of the ratio
};

struct WeisslerReport {
  double max_ratio = 0.0;
  double max_ratio_se = 0.0;
  bool violation = false;          // some ratio exceeded 1 + 3 SE
  std::vector<cplx> witness;       // the offending polynomial, empty if none
  double witness_ratio = 0.0;
  int trials = 0;
};

// Empirical contraction check for T_r : H_p -> H_q on one variable over
// random polynomials of degree <= 8 (trial 0 is the canary f = 1 + z).
WeisslerReport weissler_check(double p, double q, double r, int trials,
                              std::uint32_t mc_samples, std::uint64_t seed);

// Empirical max of ||T_r f||_q / ||f||_p over the same ensemble, to be held
// against the universal bound 1/(1-r).
RatioEstimate one_var_tr_norm_bound(double r, double p, double q, int trials,
                                    std::uint32_t mc_samples, std::uint64_t seed);

struct MoinResult {
  double best_ratio = 0.0;
  double best_ratio_se = 0.0;
  std::vector<cplx> best_coeffs;
  std::vector<std::pair<std::uint64_t, double>> growth; // (N, best ratio) per doubling
};

// Certified lower bound for the best constant comparing H_q and H_p norms of
// length-N Dirichlet polynomials: multi-start random coefficients plus a
// sign/phase coordinate ascent, seeded with the winner of the N/2 problem.
MoinResult moin_lower_bound(double p, double q, std::uint64_t N, int search_iters,
                            std::uint64_t seed, std::uint32_t mc_samples,
                            const PrimeTable& primes);

} // namespace dirlab
