#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dirlab/bohr.hpp"
#include "dirlab/prime_index.hpp"
#include "dirlab/series.hpp"

namespace dirlab {

// Selects one admissible-space norm on Dirichlet polynomials.
struct NormTag {
  enum class Family { ell1, ellinf, csup, dinf, hp };

  Family family = Family::ell1;
  double p = 2.0;    // HP only, finite
  bool weak = false; // weak-norm wrapper

  static NormTag make(Family f, double p = 2.0, bool weak = false);
  static NormTag parse(const std::string& name, double p = 2.0, bool weak = false);
  std::string name() const;
  bool sampled() const { return family == Family::dinf || family == Family::hp; }
  NormTag plain() const {
    NormTag t = *this;
    t.weak = false;
    return t;
  }
};

// Effort knobs for the sup-norm estimator over C_0. The t-grid is the
// grid_points-long prefix of the base-2 van der Corput sequence on
// [0, t_span] (a nested refinement of the uniform dyadic grid), so raising
// grid_points or torus_samples can only enlarge the candidate set.
struct DinfSampler {
  double t_span = 32.0;
  std::uint32_t grid_points = 256;  // >= 2
  std::uint32_t refine_steps = 2;   // coordinate-ascent sweeps per start
  std::uint32_t torus_samples = 4;  // random torus starts
  std::uint64_t seed = 1;
};

struct HpSampler {
  std::uint32_t mc_samples = 4096; // >= 1
  std::uint64_t seed = 1;
};

struct SamplerSet {
  DinfSampler dinf;
  HpSampler hp;
  std::uint32_t dual_samples = 16;
  std::uint64_t weak_seed = 1;

  // one master seed, fanned out into independent substreams
  static SamplerSet seeded(std::uint64_t seed);
};

// All randomized results carry (estimate, standard_error, samples); the
// exact families report std_error = 0, samples = 0.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

double norm_ell1(const DirichletTruncation& D);
double norm_ellinf(const DirichletTruncation& D);
double norm_csup(const DirichletTruncation& D);
McEstimate norm_dinf(const DirichletTruncation& D, const DinfSampler& sampler,
                     const PrimeTable& primes);
McEstimate norm_hp(const DirichletTruncation& D, double p, const HpSampler& sampler,
                   const PrimeTable& primes);
McEstimate weak_norm(const DirichletTruncation& D, const NormTag& tag,
                     std::uint32_t dual_samples, std::uint64_t seed,
                     const SamplerSet& samplers, const PrimeTable& primes);

// dispatcher over families, including the weak wrapper
McEstimate norm(const DirichletTruncation& D, const NormTag& tag,
                const SamplerSet& samplers, const PrimeTable& primes);

// Norms of all truncations S_N for N in the (ascending) schedule, sharing
// samples across schedule points for the Monte Carlo families.
struct ScheduledNorms {
  std::vector<double> values;
  std::vector<double> std_errors;
  std::uint64_t samples = 0;
};
ScheduledNorms norm_schedule(const DirichletTruncation& D, const NormTag& tag,
                             std::span<const std::uint64_t> schedule,
                             const SamplerSet& samplers, const PrimeTable& primes);

// Dual-unit-ball sample set shared by the weak norm and the weak abscissa:
// exact real-sign extreme points with per-coordinate phase alignment when
// q' is 1 or infinity, plus counter-seeded random q'-normalized vectors.
std::vector<DualVector> dual_ball_candidates(const DirichletTruncation& D,
                                             std::uint32_t count, std::uint64_t seed);

struct AdmissibilityReport {
  double c1 = kInf;                // min ||D|| / sup_n ||a_n||
  double c2 = 0.0;                 // max ||D|| / sum_n ||a_n||
  std::string c1_witness, c2_witness;
  double tolerance = 0.0;
  bool ok = false;
  std::string message;             // violation description when !ok
};
AdmissibilityReport admissibility_check(const NormTag& tag, int trials,
                                        std::uint64_t seed, const SamplerSet& samplers,
                                        const PrimeTable& primes);

} // namespace dirlab
