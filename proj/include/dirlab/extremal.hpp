#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirlab/abscissa.hpp"
#include "dirlab/prime_index.hpp"
#include "dirlab/series.hpp"

namespace dirlab {

// Prime blocks A_m for the extremal series: disjoint, ascending, with the
// measured values of both index-choice clauses recorded.
struct BlockPlan {
  std::vector<double> q_schedule;                 // increasing, below the cotype
  std::vector<std::vector<std::uint64_t>> blocks; // ascending primes per block
  double mass_target = 1.0;                       // relaxation of "sum 1/p >= 1"
  std::vector<double> mass_sums;                  // sum_{p in A_m} 1/p
  std::vector<double> power_sums;                 // sum_{p in A_m} p^{-(1+q_m/m)}
  std::vector<double> power_bounds;               // 2^{-q_m/m}

  std::string to_json() const; // reproducibility record
};

struct PartialPlanError : std::runtime_error {
  BlockPlan completed;
  PartialPlanError(std::string msg, BlockPlan done)
      : std::runtime_error(std::move(msg)), completed(std::move(done)) {}
};

// 2 for the scalar field, max(q, 2) for the l_q model, +inf for q = inf
double cotype_of(const CoefficientSpaceSpec& space);

// q_m = cot - (cot - 1)/2^{m-1}, strictly increasing toward the cotype
std::vector<double> default_q_schedule(double cotype, std::size_t blocks);

// Greedy block construction: after the previous block, accumulate consecutive
// primes until sum 1/p >= mass_target, then verify the power clause.
BlockPlan build_blocks(std::span<const double> q_schedule, std::uint64_t prime_budget,
                       double mass_target, const PrimeTable& primes);

// D = sum_m sum_{p in A_m} (x_p / p^{1/q_m}) p^{-s} with x_p the canonical
// directions of the model (they realize the coefficient-choice bounds exactly
// when the model's q dominates every q_m).
DirichletTruncation build_eco(const CoefficientSpaceSpec& space, const BlockPlan& plan,
                              const PrimeTable& primes);

struct GapReport {
  AbscissaEstimate sigma_a_est;
  AbscissaEstimate sigma_unc_est;
  double predicted_gap = 0.0; // 1 - 1/cot(X)
  double mass_target_used = 1.0;
  std::string space_name;
};

// Runs the l1 Bohr-Cahen estimator and the unconditional estimator on the
// constructed series; thresholds live in the acceptance suite, not here.
GapReport verify_gap(const DirichletTruncation& D, const CoefficientSpaceSpec& space,
                     const BlockPlan& plan, int sign_trials, std::uint64_t seed,
                     const EstimatorParams& params, const PrimeTable& primes);

} // namespace dirlab
