#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dirlab/norms.hpp"
#include "dirlab/prime_index.hpp"
#include "dirlab/series.hpp"

namespace dirlab {

enum class AbscissaMethod { bohr_cahen, bounded_bisection, weak_sup, sign_search };

const char* method_name(AbscissaMethod m);

struct SchedulePoint {
  std::uint64_t N = 0;
  double norm = 0.0;
  double log_ratio = 0.0; // log(norm)/log(N)
};

// Estimated abscissa plus diagnostics. value uses +/-infinity sentinels with
// the paper's convention inf(empty) = +inf, inf(R) = -inf.
struct AbscissaEstimate {
  double value = -kInf;
  AbscissaMethod method = AbscissaMethod::bohr_cahen;
  std::vector<std::uint64_t> schedule;
  double fit_residual = 0.0;
  std::vector<SchedulePoint> table;
  std::map<std::string, double> diagnostics;
};

// {2, 4, ..., 2^kmax} clipped to n_max, with n_max appended when absent.
// kmax = 0 means "up to n_max".
std::vector<std::uint64_t> dyadic_schedule(std::uint64_t n_max, std::uint32_t kmax = 0);

struct EstimatorParams {
  SamplerSet samplers;
  // re-centering shift for suspected-negative abscissas: the estimate is run
  // on translate(D, -sigma0) and shifted back (the equality case of the
  // Bohr-Cahen formula needs a nonnegative abscissa)
  double recenter_sigma = 0.0;
};

// Bohr-Cahen slope estimator: least-squares slope (with intercept) of
// log ||S_N|| against log N over the running maxima of the last half of the
// schedule. fit_residual is the RMS deviation of the fit.
AbscissaEstimate bohr_cahen(const DirichletTruncation& D, const NormTag& tag,
                            std::span<const std::uint64_t> schedule,
                            const EstimatorParams& params, const PrimeTable& primes);

// Bisection on sigma with "fitted slope of the translated partial-sum norms
// <= growth_tol" as the boundedness proxy.
AbscissaEstimate bounded_bisection(const DirichletTruncation& D, const NormTag& tag,
                                   double sigma_lo, double sigma_hi, int iters,
                                   double growth_tol, // default threshold 0.02
                                   std::span<const std::uint64_t> schedule,
                                   const EstimatorParams& params, const PrimeTable& primes);

// sup over sampled dual-unit-ball functionals of the scalar Bohr-Cahen
// estimate of D_{x*}; diagnostics record the maximizing sample.
AbscissaEstimate weak_abscissa(const DirichletTruncation& D, const NormTag& tag,
                               std::uint32_t dual_samples, std::uint64_t seed,
                               std::span<const std::uint64_t> schedule,
                               const EstimatorParams& params, const PrimeTable& primes);

enum class SignStrategy { exhaustive, random };

// Worst-sign pointwise abscissa (primary path), cross-checked on vector
// models against the weak absolute abscissa; the larger of the two is
// returned, both recorded in diagnostics.
AbscissaEstimate unconditional_abscissa(const DirichletTruncation& D, SignStrategy strategy,
                                        int trials, std::uint64_t seed,
                                        std::span<const std::uint64_t> schedule,
                                        const EstimatorParams& params,
                                        const PrimeTable& primes);

struct StripReport {
  AbscissaEstimate first, second;
  double width = 0.0; // first - second, signed
};
StripReport strip_report(const DirichletTruncation& D, const NormTag& tag_a,
                         const NormTag& tag_b, std::span<const std::uint64_t> schedule,
                         const EstimatorParams& params, const PrimeTable& primes);

struct StripExponentReport {
  double exponent = 0.0;
  double fit_residual = 0.0;
  std::vector<SchedulePoint> table; // N, max ratio, log ratio / log N
  std::string assumption;           // Bohr-fundamental-theorem hypothesis note
};
// max_{random sign draws} ||P||_strong / ||P||_weak per N, slope of the log
// of that against log N.
StripExponentReport strip_exponent(const NormTag& tag_strong, const NormTag& tag_weak,
                                   std::span<const std::uint64_t> n_list, int trials,
                                   std::uint64_t seed, const EstimatorParams& params,
                                   const PrimeTable& primes);

} // namespace dirlab
