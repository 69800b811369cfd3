#include "dirlab/abscissa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dirlab/rng.hpp"

namespace dirlab {

const char* method_name(AbscissaMethod m) {
  switch (m) {
    case AbscissaMethod::bohr_cahen: return "BOHR_CAHEN";
    case AbscissaMethod::bounded_bisection: return "BOUNDED_BISECTION";
    case AbscissaMethod::weak_sup: return "WEAK_SUP";
    case AbscissaMethod::sign_search: return "SIGN_SEARCH";
  }
  return "?";
}

std::vector<std::uint64_t> dyadic_schedule(std::uint64_t n_max, std::uint32_t kmax) {
  if (n_max < 2) throw std::domain_error("dyadic_schedule: n_max must be >= 2");
  std::vector<std::uint64_t> out;
  std::uint64_t N = 2;
  for (std::uint32_t k = 1; N <= n_max && (kmax == 0 || k <= kmax); ++k, N *= 2)
    out.push_back(N);
  if (out.empty() || out.back() < n_max) {
    if (kmax == 0) out.push_back(n_max);
  }
  return out;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
  std::size_t points = 0;
};

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  LineFit f;
  f.points = xs.size();
  if (xs.size() < 2) {
    f.slope = 0.0;
    f.intercept = xs.empty() ? 0.0 : ys[0];
    return f;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = n * sxx - sx * sx;
  f.slope = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

// limsup proxy: running maxima of log-norms over the last half of the
// schedule, then a least-squares line through them
AbscissaEstimate slope_estimate(const DirichletTruncation& D, const NormTag& tag,
                                std::span<const std::uint64_t> schedule,
                                const EstimatorParams& params, const PrimeTable& primes) {
  if (schedule.size() < 4)
    throw std::domain_error("bohr_cahen: schedule needs at least 4 points");

  const double sigma0 = params.recenter_sigma;
  const DirichletTruncation* Dp = &D;
  DirichletTruncation shifted(D.space(), D.n_max());
  if (sigma0 != 0.0) {
    shifted = translate(D, -sigma0);
    Dp = &shifted;
  }

  const ScheduledNorms norms = norm_schedule(*Dp, tag, schedule, params.samplers, primes);

  AbscissaEstimate est;
  est.method = AbscissaMethod::bohr_cahen;
  est.schedule.assign(schedule.begin(), schedule.end());
  est.table.resize(schedule.size());
  bool any_positive = false;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double nn = norms.values[i];
    est.table[i] = {schedule[i], nn,
                    nn > 0 ? std::log(nn) / std::log(double(schedule[i])) : -kInf};
    any_positive |= nn > 0;
  }
  if (!any_positive) {
    est.value = -kInf; // finite sums of nothing converge everywhere
    return est;
  }

  const std::size_t tail = (schedule.size() + 1) / 2;
  std::vector<double> xs, ys;
  double run_max = -kInf;
  for (std::size_t i = schedule.size() - tail; i < schedule.size(); ++i) {
    const double nn = norms.values[i];
    if (nn > 0) run_max = std::max(run_max, std::log(nn));
    if (run_max == -kInf) continue;
    xs.push_back(std::log(double(schedule[i])));
    ys.push_back(run_max);
  }
  if (xs.size() < 2) {
    // the norms only become positive at the very end; fall back to the
    // full schedule so a slope exists
    xs.clear();
    ys.clear();
    run_max = -kInf;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      const double nn = norms.values[i];
      if (nn > 0) run_max = std::max(run_max, std::log(nn));
      if (run_max == -kInf) continue;
      xs.push_back(std::log(double(schedule[i])));
      ys.push_back(run_max);
    }
  }
  const LineFit fit = fit_line(xs, ys);
  est.value = fit.slope - sigma0;
  est.fit_residual = fit.rms;
  est.diagnostics["fit_points"] = double(fit.points);
  est.diagnostics["intercept"] = fit.intercept;
  if (sigma0 != 0.0) est.diagnostics["recenter_sigma"] = sigma0;
  if (norms.samples) est.diagnostics["mc_samples"] = double(norms.samples);
  return est;
}

} // namespace

AbscissaEstimate bohr_cahen(const DirichletTruncation& D, const NormTag& tag,
                            std::span<const std::uint64_t> schedule,
                            const EstimatorParams& params, const PrimeTable& primes) {
  return slope_estimate(D, tag, schedule, params, primes);
}

AbscissaEstimate bounded_bisection(const DirichletTruncation& D, const NormTag& tag,
                                   double sigma_lo, double sigma_hi, int iters,
                                   double growth_tol,
                                   std::span<const std::uint64_t> schedule,
                                   const EstimatorParams& params, const PrimeTable& primes) {
  if (!(sigma_lo < sigma_hi)) throw std::domain_error("bounded_bisection: need lo < hi");
  if (iters < 1) throw std::domain_error("bounded_bisection: iters >= 1");

  auto slope_at = [&](double sigma) {
    EstimatorParams p = params;
    p.recenter_sigma = 0.0;
    return slope_estimate(translate(D, sigma), tag, schedule, p, primes).value;
  };

  const double slope_lo = slope_at(sigma_lo);
  const double slope_hi = slope_at(sigma_hi);
  const bool lo_bounded = slope_lo <= growth_tol;
  const bool hi_bounded = slope_hi <= growth_tol;
  if (lo_bounded == hi_bounded)
    throw std::runtime_error(
        "bounded_bisection: bracketing failure, endpoint slopes " +
        std::to_string(slope_lo) + " and " + std::to_string(slope_hi) +
        " classify identically at growth_tol " + std::to_string(growth_tol));

  double lo = sigma_lo, hi = sigma_hi;
  double last_lo_slope = slope_lo, last_hi_slope = slope_hi;
  for (int it = 0; it < iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = slope_at(mid);
    if (s <= growth_tol) {
      hi = mid;
      last_hi_slope = s;
    } else {
      lo = mid;
      last_lo_slope = s;
    }
  }

  AbscissaEstimate est;
  est.method = AbscissaMethod::bounded_bisection;
  est.schedule.assign(schedule.begin(), schedule.end());
  est.value = 0.5 * (lo + hi);
  est.diagnostics["growth_tol"] = growth_tol;
  est.diagnostics["slope_at_lo"] = last_lo_slope;
  est.diagnostics["slope_at_hi"] = last_hi_slope;
  est.diagnostics["bracket_lo"] = lo;
  est.diagnostics["bracket_hi"] = hi;
  return est;
}

AbscissaEstimate weak_abscissa(const DirichletTruncation& D, const NormTag& tag,
                               std::uint32_t dual_samples, std::uint64_t seed,
                               std::span<const std::uint64_t> schedule,
                               const EstimatorParams& params, const PrimeTable& primes) {
  if (D.space().is_scalar())
    throw std::domain_error("weak_abscissa: scalar-kind input");
  const auto cands = dual_ball_candidates(D, dual_samples, seed);

  AbscissaEstimate best;
  best.method = AbscissaMethod::weak_sup;
  best.schedule.assign(schedule.begin(), schedule.end());
  best.value = -kInf;
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const DirichletTruncation Dx = apply_functional(D, cands[i]);
    AbscissaEstimate e = slope_estimate(Dx, tag.plain(), schedule, params, primes);
    if (e.value > best.value) {
      const double keep = e.value;
      e.method = AbscissaMethod::weak_sup;
      best = std::move(e);
      best.value = keep;
      argmax = i;
    }
  }
  best.diagnostics["dual_candidates"] = double(cands.size());
  best.diagnostics["argmax_candidate"] = double(argmax);
  if (!cands.empty()) best.diagnostics["argmax_dual_norm"] = cands[argmax].norm();
  return best;
}

namespace {

DirichletTruncation with_signs(const DirichletTruncation& D, std::span<const int> signs) {
  DirichletTruncation out(D.space(), D.n_max());
  const auto& sup = D.support();
  for (std::size_t k = 0; k < sup.size(); ++k)
    out.set(sup[k].first, sup[k].second * cplx{double(signs[k]), 0});
  return out;
}

// csup norm of the sign-modulated truncation, the greedy ascent objective
double csup_of_signs(const DirichletTruncation& D, std::span<const int> signs) {
  return norm_csup(with_signs(D, signs));
}

} // namespace

AbscissaEstimate unconditional_abscissa(const DirichletTruncation& D, SignStrategy strategy,
                                        int trials, std::uint64_t seed,
                                        std::span<const std::uint64_t> schedule,
                                        const EstimatorParams& params,
                                        const PrimeTable& primes) {
  const std::size_t S = D.support_size();
  const NormTag csup = NormTag::make(NormTag::Family::csup);

  AbscissaEstimate best_sign;
  best_sign.method = AbscissaMethod::sign_search;
  best_sign.schedule.assign(schedule.begin(), schedule.end());
  best_sign.value = -kInf;

  if (D.empty()) {
    best_sign.diagnostics["sign_path"] = -kInf;
    return best_sign;
  }

  auto consider = [&](std::span<const int> signs) {
    AbscissaEstimate e =
        slope_estimate(with_signs(D, signs), csup, schedule, params, primes);
    if (e.value > best_sign.value) {
      const double keep = e.value;
      e.method = AbscissaMethod::sign_search;
      best_sign = std::move(e);
      best_sign.value = keep;
    }
  };

  if (strategy == SignStrategy::exhaustive) {
    if (D.n_max() > 20)
      throw std::length_error("unconditional_abscissa: exhaustive search needs n_max <= 20");
    std::vector<int> signs(S, 1);
    // epsilon and -epsilon give the same norms, so pin the first sign
    const std::uint64_t count = S ? (1ull << (S - 1)) : 1;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      for (std::size_t k = 1; k < S; ++k)
        signs[k] = (mask >> (k - 1)) & 1 ? -1 : 1;
      consider(signs);
    }
  } else {
    if (trials < 1) throw std::domain_error("unconditional_abscissa: trials >= 1");
    std::vector<int> signs(S, 1);
    consider(signs); // the aligned pattern first

    const std::uint64_t s0 = rng::substream(seed, 0x516);
    for (int t = 0; t < trials; ++t) {
      for (std::size_t k = 0; k < S; ++k)
        signs[k] = rng::sign(s0, std::uint64_t(t) * S + k) > 0 ? 1 : -1;
      consider(signs);
      // greedy coordinate-flip ascent on the csup norm
      double cur = csup_of_signs(D, signs);
      for (std::size_t k = 0; k < S; ++k) {
        signs[k] = -signs[k];
        const double cand = csup_of_signs(D, signs);
        if (cand > cur)
          cur = cand;
        else
          signs[k] = -signs[k];
      }
      consider(signs);
    }
  }

  best_sign.diagnostics["sign_path"] = best_sign.value;

  // Cross-check on vector models: sigma_unc equals the weak absolute
  // abscissa, estimated through the weak-l1 norms of the partial sums (the
  // dual sup is taken inside each norm, so the maximizer may vary with N;
  // a per-functional slope sup would decouple x* from N and overestimate
  // on truncations).
  if (!D.space().is_scalar()) {
    const AbscissaEstimate weak = slope_estimate(
        D, NormTag::make(NormTag::Family::ell1, 2.0, true), schedule, params, primes);
    best_sign.diagnostics["weak_path"] = weak.value;
    if (weak.value > best_sign.value) {
      const auto diag = best_sign.diagnostics;
      AbscissaEstimate out = weak;
      out.method = AbscissaMethod::sign_search;
      out.diagnostics = diag;
      return out;
    }
  }
  return best_sign;
}

StripReport strip_report(const DirichletTruncation& D, const NormTag& tag_a,
                         const NormTag& tag_b, std::span<const std::uint64_t> schedule,
                         const EstimatorParams& params, const PrimeTable& primes) {
  StripReport rep;
  rep.first = bohr_cahen(D, tag_a, schedule, params, primes);
  rep.second = bohr_cahen(D, tag_b, schedule, params, primes);
  rep.width = rep.first.value - rep.second.value;
  return rep;
}

StripExponentReport strip_exponent(const NormTag& tag_strong, const NormTag& tag_weak,
                                   std::span<const std::uint64_t> n_list, int trials,
                                   std::uint64_t seed, const EstimatorParams& params,
                                   const PrimeTable& primes) {
  if (n_list.empty()) throw std::domain_error("strip_exponent: empty N list");
  if (trials < 1) throw std::domain_error("strip_exponent: trials >= 1");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::domain_error("strip_exponent: N list must be increasing");

  StripExponentReport rep;
  rep.assumption = "assumes " + tag_weak.name() +
                   " satisfies Bohr's fundamental theorem (not verifiable numerically)";
  const std::uint64_t s0 = rng::substream(seed, 0x5e);

  std::vector<double> xs, ys;
  for (const std::uint64_t N : n_list) {
    double best = 0.0;
    for (int t = 0; t < trials; ++t) {
      DirichletTruncation P(CoefficientSpaceSpec::scalar_space(), N);
      const std::uint64_t st = rng::mix(s0, (N << 20) + t);
      for (std::uint64_t n = 1; n <= N; ++n)
        P.set(n, Coefficient::scalar(cplx{rng::sign(st, n), 0}));
      const double num = norm(P, tag_strong, params.samplers, primes).value;
      const double den = norm(P, tag_weak, params.samplers, primes).value;
      if (den > 0) best = std::max(best, num / den);
    }
    rep.table.push_back({N, best, best > 0 ? std::log(best) / std::log(double(N)) : 0.0});
    if (best > 0) {
      xs.push_back(std::log(double(N)));
      ys.push_back(std::log(best));
    }
  }
  const LineFit fit = fit_line(xs, ys);
  rep.exponent = fit.slope;
  rep.fit_residual = fit.rms;
  return rep;
}

} // namespace dirlab
