#include "dirlab/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dirlab/kernels.hpp"
#include "dirlab/rng.hpp"

namespace dirlab {

McEstimate one_var_hp_norm(std::span<const cplx> coeffs, double p,
                           std::uint32_t mc_samples, std::uint64_t seed) {
  if (!(p >= 1.0) || std::isinf(p))
    throw std::domain_error("one_var_hp_norm: p must be finite and >= 1");
  if (p == 2.0) {
    double s = 0.0;
    for (const cplx& c : coeffs) s += std::norm(c);
    return {std::sqrt(s), 0.0, 0};
  }
  if (mc_samples == 0) throw std::domain_error("one_var_hp_norm: mc_samples >= 1");

  std::vector<double> re(mc_samples), im(mc_samples, 0.0);
  for (std::uint32_t i = 0; i < mc_samples; ++i) {
    const double th = rng::angle(seed, i);
    const cplx z{std::cos(th), std::sin(th)};
    cplx acc{}, zp{1, 0};
    for (const cplx& c : coeffs) {
      acc += c * zp;
      zp *= z;
    }
    re[i] = std::abs(acc);
  }
  const double m1 = kern::sum_abs_pow(re.data(), im.data(), mc_samples, p) / mc_samples;
  const double m2 = kern::sum_abs_pow(re.data(), im.data(), mc_samples, 2.0 * p) / mc_samples;
  if (m1 <= 0.0) return {0.0, 0.0, mc_samples};
  const double est = std::pow(m1, 1.0 / p);
  const double se = std::sqrt(std::max(m2 - m1 * m1, 0.0) / mc_samples) *
                    std::pow(m1, 1.0 / p - 1.0) / p;
  return {est, se, mc_samples};
}

namespace {

RatioEstimate tr_ratio(std::span<const cplx> coeffs, double r, double p, double q,
                       std::uint32_t mc_samples, std::uint64_t seed) {
  std::vector<cplx> scaled(coeffs.begin(), coeffs.end());
  double rk = 1.0;
  for (std::size_t k = 1; k < scaled.size(); ++k) {
    rk *= r;
    scaled[k] *= rk;
  }
  const McEstimate num = one_var_hp_norm(scaled, q, mc_samples, rng::substream(seed, 11));
  const McEstimate den = one_var_hp_norm(coeffs, p, mc_samples, rng::substream(seed, 13));
  if (den.value <= 0.0) return {0.0, 0.0};
  const double ratio = num.value / den.value;
  const double rel = std::sqrt(
      (num.value > 0 ? std::pow(num.std_error / num.value, 2) : 0.0) +
      std::pow(den.std_error / den.value, 2));
  return {ratio, ratio * rel};
}

std::vector<cplx> random_poly(std::uint64_t seed, int trial) {
  const std::uint64_t st = rng::mix(seed, 100 + trial);
  const std::size_t deg = 1 + rng::mix(st, 0) % 8;
  std::vector<cplx> c(deg + 1);
  for (std::size_t k = 0; k <= deg; ++k) c[k] = rng::gaussian(st, 1 + k);
  return c;
}

} // namespace

WeisslerReport weissler_check(double p, double q, double r, int trials,
                              std::uint32_t mc_samples, std::uint64_t seed) {
  if (!(p >= 1.0 && p <= q) || std::isinf(q))
    throw std::domain_error("weissler_check: need 1 <= p <= q < inf");
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("weissler_check: r in [0,1)");
  if (trials < 1) throw std::domain_error("weissler_check: trials >= 1");

  WeisslerReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    // trial 0 is the canary 1 + z, the equality direction of the contraction
    const std::vector<cplx> f =
        t == 0 ? std::vector<cplx>{cplx{1, 0}, cplx{1, 0}} : random_poly(seed, t);
    const RatioEstimate ratio = tr_ratio(f, r, p, q, mc_samples, rng::mix(seed, t));
    if (ratio.value > rep.max_ratio) {
      rep.max_ratio = ratio.value;
      rep.max_ratio_se = ratio.std_error;
    }
    if (ratio.value > 1.0 + 3.0 * ratio.std_error &&
        (!rep.violation || ratio.value > rep.witness_ratio)) {
      rep.violation = true;
      rep.witness = f;
      rep.witness_ratio = ratio.value;
    }
  }
  return rep;
}

RatioEstimate one_var_tr_norm_bound(double r, double p, double q, int trials,
                                    std::uint32_t mc_samples, std::uint64_t seed) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("one_var_tr_norm_bound: r in [0,1)");
  if (trials < 1) throw std::domain_error("one_var_tr_norm_bound: trials >= 1");
  RatioEstimate best;
  for (int t = 0; t < trials; ++t) {
    // geometric-like truncations stress the bound; mix them into the ensemble
    std::vector<cplx> f;
    if (t % 4 == 0) {
      f.assign(9, cplx{1, 0});
    } else {
      f = random_poly(seed, t);
    }
    const RatioEstimate ratio = tr_ratio(f, r, p, q, mc_samples, rng::mix(seed, 500 + t));
    if (ratio.value > best.value) best = ratio;
  }
  return best;
}

namespace {

struct MoinEval {
  double ratio;
  double se;
};

MoinEval moin_ratio(const std::vector<cplx>& coeffs, double p, double q,
                    std::uint32_t mc_samples, std::uint64_t seed,
                    const PrimeTable& primes) {
  DirichletTruncation D(CoefficientSpaceSpec::scalar_space(), coeffs.size());
  for (std::size_t n = 1; n <= coeffs.size(); ++n)
    if (coeffs[n - 1] != cplx{}) D.set(n, Coefficient::scalar(coeffs[n - 1]));
  HpSampler hs;
  hs.mc_samples = mc_samples;
  hs.seed = rng::substream(seed, 21);
  const McEstimate num = norm_hp(D, q, hs, primes);
  hs.seed = rng::substream(seed, 22);
  const McEstimate den = norm_hp(D, p, hs, primes);
  if (den.value <= 0.0) return {0.0, 0.0};
  const double ratio = num.value / den.value;
  const double rel = std::sqrt(
      (num.value > 0 ? std::pow(num.std_error / num.value, 2) : 0.0) +
      std::pow(den.std_error / den.value, 2));
  return {ratio, ratio * rel};
}

} // namespace

MoinResult moin_lower_bound(double p, double q, std::uint64_t N, int search_iters,
                            std::uint64_t seed, std::uint32_t mc_samples,
                            const PrimeTable& primes) {
  if (N < 2) throw std::domain_error("moin_lower_bound: N >= 2");
  if (search_iters < 0) throw std::domain_error("moin_lower_bound: search_iters >= 0");

  MoinResult res;
  std::vector<std::vector<cplx>> starts;

  // nest the winner of the half-size problem so the bound grows with N
  if (N >= 4) {
    MoinResult half = moin_lower_bound(p, q, N / 2, search_iters, seed, mc_samples, primes);
    half.best_coeffs.resize(N, cplx{});
    starts.push_back(std::move(half.best_coeffs));
    res.growth = std::move(half.growth);
  }
  starts.push_back(std::vector<cplx>(N, cplx{1, 0})); // the all-ones floor
  const std::uint64_t s0 = rng::substream(seed, 0x30 + N);
  for (int it = 0; it < search_iters; ++it) {
    std::vector<cplx> c(N);
    for (std::uint64_t n = 0; n < N; ++n) c[n] = rng::gaussian(rng::mix(s0, it), n);
    starts.push_back(std::move(c));
  }

  // common random numbers: one evaluation seed per N level, so candidate
  // comparisons are deterministic
  const std::uint64_t eval_seed = rng::substream(seed, 0x700 + N);
  auto eval = [&](const std::vector<cplx>& c) {
    return moin_ratio(c, p, q, mc_samples, eval_seed, primes);
  };

  const cplx moves[3] = {cplx{-1, 0}, cplx{0, 1}, cplx{0, -1}};
  for (auto& start : starts) {
    std::vector<cplx> cur = start;
    MoinEval cur_val = eval(cur);
    // sign/phase coordinate ascent
    for (std::uint64_t j = 0; j < N; ++j) {
      for (const cplx& m : moves) {
        std::vector<cplx> cand = cur;
        cand[j] *= m;
        const MoinEval v = eval(cand);
        if (v.ratio > cur_val.ratio) {
          cur = std::move(cand);
          cur_val = v;
        }
      }
    }
    if (cur_val.ratio > res.best_ratio) {
      res.best_ratio = cur_val.ratio;
      res.best_ratio_se = cur_val.se;
      res.best_coeffs = cur;
    }
  }
  res.growth.push_back({N, res.best_ratio});
  return res;
}

} // namespace dirlab
