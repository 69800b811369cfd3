#include "dirlab/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "dirlab/kernels.hpp"
#include "dirlab/rng.hpp"

namespace dirlab {

// --- tags and samplers -------------------------------------------------------

NormTag NormTag::make(Family f, double p, bool weak) {
  NormTag t;
  t.family = f;
  t.p = p;
  t.weak = weak;
  if (f == Family::hp) {
    if (!(p >= 1.0)) throw std::domain_error("hp norm: p must be >= 1");
    if (std::isinf(p)) t.family = Family::dinf; // H_inf is the sup norm
  }
  return t;
}

NormTag NormTag::parse(const std::string& name, double p, bool weak) {
  if (name == "ell1") return make(Family::ell1, p, weak);
  if (name == "ellinf") return make(Family::ellinf, p, weak);
  if (name == "csup" || name == "c") return make(Family::csup, p, weak);
  if (name == "dinf") return make(Family::dinf, p, weak);
  if (name == "hp") return make(Family::hp, p, weak);
  throw std::domain_error("unknown norm family: " + name);
}

std::string NormTag::name() const {
  std::string base;
  switch (family) {
    case Family::ell1: base = "ell1"; break;
    case Family::ellinf: base = "ellinf"; break;
    case Family::csup: base = "csup"; break;
    case Family::dinf: base = "dinf"; break;
    case Family::hp: {
      std::string ps = std::to_string(p);
      ps.erase(ps.find_last_not_of('0') + 1);
      if (!ps.empty() && ps.back() == '.') ps.pop_back();
      base = "hp(" + ps + ")";
      break;
    }
  }
  return weak ? "weak-" + base : base;
}

SamplerSet SamplerSet::seeded(std::uint64_t seed) {
  SamplerSet s;
  s.dinf.seed = rng::substream(seed, 0xd1f);
  s.hp.seed = rng::substream(seed, 0x5a11);
  s.weak_seed = rng::substream(seed, 0xea1);
  return s;
}

// --- prefix accumulation ------------------------------------------------------

namespace {

// Dense scratch for running coefficient sums with an O(1)-amortized q-norm.
class PrefixState {
public:
  explicit PrefixState(const CoefficientSpaceSpec& space)
      : space_(space), scalar_(space.is_scalar()) {
    if (!scalar_) {
      re_.assign(space.dim, 0.0);
      im_.assign(space.dim, 0.0);
    }
  }

  void add(const Coefficient& a, cplx scale) {
    if (scalar_) {
      acc_ += a.get(0) * scale;
      return;
    }
    for (const auto& [j, v] : a.entries()) {
      const cplx w = v * scale;
      const double old_re = re_[j], old_im = im_[j];
      const double old_abs2 = old_re * old_re + old_im * old_im;
      if (old_abs2 == 0.0) touched_.push_back(j);
      re_[j] += w.real();
      im_[j] += w.imag();
      const double new_abs2 = re_[j] * re_[j] + im_[j] * im_[j];
      update_aggregate(j, old_abs2, new_abs2);
    }
  }

  double norm() {
    if (scalar_) return std::abs(acc_);
    const double q = space_.q;
    if (std::isinf(q)) return std::sqrt(max2_);
    if (q == 2.0) return std::sqrt(std::max(sumq_, 0.0));
    return std::pow(std::max(sumq_, 0.0), 1.0 / q);
  }

private:
  void update_aggregate(std::uint32_t j, double old_abs2, double new_abs2) {
    const double q = space_.q;
    if (std::isinf(q)) {
      if (new_abs2 >= max2_) {
        max2_ = new_abs2;
        argmax_ = j;
      } else if (j == argmax_) {
        // the maximizing coordinate shrank: rescan the touched set
        max2_ = 0.0;
        for (std::uint32_t t : touched_) {
          const double m = re_[t] * re_[t] + im_[t] * im_[t];
          if (m >= max2_) {
            max2_ = m;
            argmax_ = t;
          }
        }
      }
      return;
    }
    if (q == 2.0) {
      sumq_ += new_abs2 - old_abs2;
    } else if (q == 1.0) {
      sumq_ += std::sqrt(new_abs2) - std::sqrt(old_abs2);
    } else {
      sumq_ += std::pow(new_abs2, 0.5 * q) - std::pow(old_abs2, 0.5 * q);
    }
  }

  CoefficientSpaceSpec space_;
  bool scalar_;
  cplx acc_{};
  std::vector<double> re_, im_;
  std::vector<std::uint32_t> touched_;
  double sumq_ = 0.0;
  double max2_ = 0.0;
  std::uint32_t argmax_ = 0;
};

void check_schedule(const DirichletTruncation& D, std::span<const std::uint64_t> schedule) {
  if (schedule.empty()) throw std::domain_error("empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] > D.n_max())
      throw std::out_of_range("schedule point exceeds n_max");
    if (i && schedule[i] <= schedule[i - 1])
      throw std::domain_error("schedule must be strictly increasing");
  }
}

} // namespace

// --- exact families -----------------------------------------------------------

double norm_ell1(const DirichletTruncation& D) {
  double s = 0.0;
  for (const auto& [n, a] : D.support()) s += space_norm(D.space(), a);
  return s;
}

double norm_ellinf(const DirichletTruncation& D) {
  double s = 0.0;
  for (const auto& [n, a] : D.support()) s = std::max(s, space_norm(D.space(), a));
  return s;
}

double norm_csup(const DirichletTruncation& D) {
  PrefixState st(D.space());
  double best = 0.0;
  for (const auto& [n, a] : D.support()) {
    st.add(a, {1, 0});
    best = std::max(best, st.norm());
  }
  return best;
}

namespace {

ScheduledNorms exact_schedule(const DirichletTruncation& D, NormTag::Family family,
                              std::span<const std::uint64_t> schedule) {
  ScheduledNorms out;
  out.values.assign(schedule.size(), 0.0);
  out.std_errors.assign(schedule.size(), 0.0);

  PrefixState st(D.space());
  double agg = 0.0;
  std::size_t s = 0;
  const auto& sup = D.support();
  std::size_t k = 0;
  while (s < schedule.size()) {
    while (k < sup.size() && sup[k].first <= schedule[s]) {
      const auto& [n, a] = sup[k];
      switch (family) {
        case NormTag::Family::ell1: agg += space_norm(D.space(), a); break;
        case NormTag::Family::ellinf: agg = std::max(agg, space_norm(D.space(), a)); break;
        case NormTag::Family::csup:
          st.add(a, {1, 0});
          agg = std::max(agg, st.norm());
          break;
        default: throw std::logic_error("exact_schedule: not an exact family");
      }
      ++k;
    }
    out.values[s++] = agg;
  }
  return out;
}

} // namespace

// --- Hardy norms ----------------------------------------------------------------

namespace {

bool hp_exact_path(const DirichletTruncation& D, double p) {
  return p == 2.0 && (D.space().is_scalar() || D.space().q == 2.0);
}

ScheduledNorms hp_schedule(const DirichletTruncation& D, double p,
                           std::span<const std::uint64_t> schedule,
                           const HpSampler& sampler, const PrimeTable& primes) {
  ScheduledNorms out;
  out.values.assign(schedule.size(), 0.0);
  out.std_errors.assign(schedule.size(), 0.0);
  if (!(p >= 1.0) || std::isinf(p))
    throw std::domain_error("hp norm: p must be finite and >= 1");

  if (hp_exact_path(D, p)) {
    // Parseval: ||S_N||_{H_2}^2 = sum_{n<=N} ||a_n||^2
    double sumsq = 0.0;
    std::size_t k = 0;
    const auto& sup = D.support();
    for (std::size_t s = 0; s < schedule.size(); ++s) {
      while (k < sup.size() && sup[k].first <= schedule[s]) {
        const double nn = space_norm(D.space(), sup[k].second);
        sumsq += nn * nn;
        ++k;
      }
      out.values[s] = std::sqrt(sumsq);
    }
    return out;
  }

  if (sampler.mc_samples == 0) throw std::domain_error("hp sampler: mc_samples >= 1");
  const std::uint32_t S = sampler.mc_samples;
  out.samples = S;
  if (D.empty()) return out;

  LiftEvaluator ev(D, primes);
  const std::uint32_t d = ev.torus_dim();
  const auto& sup = D.support();

  // per-sample prefix norms at every schedule point
  std::vector<double> vals(schedule.size() * S, 0.0);
  std::vector<double> theta(d);
  std::vector<cplx> tv;
  for (std::uint32_t i = 0; i < S; ++i) {
    for (std::uint32_t j = 0; j < d; ++j)
      theta[j] = rng::angle(sampler.seed, std::uint64_t(i) * d + j);
    ev.term_values(theta, tv);
    PrefixState st(D.space());
    std::size_t k = 0;
    for (std::size_t s = 0; s < schedule.size(); ++s) {
      while (k < sup.size() && sup[k].first <= schedule[s]) {
        st.add(sup[k].second, tv[k]);
        ++k;
      }
      vals[s * S + i] = st.norm();
    }
  }

  const std::vector<double> zeros(S, 0.0);
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    const double* v = vals.data() + s * S;
    const double m1 = kern::sum_abs_pow(v, zeros.data(), S, p) / S;
    const double m2 = kern::sum_abs_pow(v, zeros.data(), S, 2.0 * p) / S;
    if (m1 <= 0.0) continue;
    const double est = std::pow(m1, 1.0 / p);
    const double var_m1 = std::max(m2 - m1 * m1, 0.0) / S;
    out.values[s] = est;
    out.std_errors[s] = std::sqrt(var_m1) * std::pow(m1, 1.0 / p - 1.0) / p;
  }
  return out;
}

} // namespace

McEstimate norm_hp(const DirichletTruncation& D, double p, const HpSampler& sampler,
                   const PrimeTable& primes) {
  const std::uint64_t sched[1] = {D.n_max()};
  ScheduledNorms r = hp_schedule(D, p, sched, sampler, primes);
  return {r.values[0], r.std_errors[0], r.samples};
}

// --- sup norm over C_0 ------------------------------------------------------------

namespace {

std::uint32_t bit_reverse(std::uint32_t x, std::uint32_t bits) {
  std::uint32_t r = 0;
  for (std::uint32_t b = 0; b < bits; ++b) {
    r = (r << 1) | (x & 1u);
    x >>= 1;
  }
  return r;
}

constexpr int kAscentAngles = 32;

// Coordinate-ascent maximizer of the lift modulus on the polytorus.
// Keeps the current monomial values and updates one variable at a time by
// an exact single-variable polynomial scan over a fixed angle grid (the
// current angle always stays in the candidate set, so sweeps never descend).
class Ascent {
public:
  Ascent(const DirichletTruncation& D, const LiftEvaluator& ev)
      : D_(D), ev_(ev), space_(D.space()), dim_(space_.is_scalar() ? 1 : space_.dim) {
    const std::size_t T = ev.terms();
    terms_of_var_.resize(ev.torus_dim());
    for (std::size_t k = 0; k < T; ++k)
      for (const auto& f : ev.term_factors(k)) terms_of_var_[f.var].push_back({k, f.exp});
    coeffs_.reserve(T);
    for (const auto& [n, a] : D.support()) coeffs_.push_back(&a);
  }

  // run from a start point, return the best value seen
  double run(std::span<const double> theta0, std::uint32_t sweeps) {
    theta_.assign(theta0.begin(), theta0.end());
    ev_.term_values(theta_, tv_);
    acc_.assign(dim_, cplx{});
    for (std::size_t k = 0; k < tv_.size(); ++k) add_term(acc_, k, tv_[k]);
    double best = vec_norm(acc_);
    for (std::uint32_t s = 0; s < sweeps; ++s) best = std::max(best, sweep());
    return best;
  }

private:
  void add_term(std::vector<cplx>& into, std::size_t k, cplx scale) {
    for (const auto& [j, v] : coeffs_[k]->entries()) into[space_.is_scalar() ? 0 : j] += v * scale;
  }

  double vec_norm(const std::vector<cplx>& v) const {
    if (space_.is_scalar()) return std::abs(v[0]);
    const double q = space_.q;
    if (std::isinf(q)) {
      double m = 0.0;
      for (const auto& z : v) m = std::max(m, std::abs(z));
      return m;
    }
    double s = 0.0;
    for (const auto& z : v) {
      const double a = std::abs(z);
      if (a) s += q == 2.0 ? a * a : (q == 1.0 ? a : std::pow(a, q));
    }
    return q == 2.0 ? std::sqrt(s) : (q == 1.0 ? s : std::pow(s, 1.0 / q));
  }

  double sweep() {
    double best = vec_norm(acc_);
    for (std::uint32_t var = 0; var < terms_of_var_.size(); ++var) {
      const auto& terms = terms_of_var_[var];
      if (terms.empty()) continue;
      const std::uint32_t maxe = ev_.max_exponent(var);

      // strip w_var from every term touching it: tv -> rest, and split
      // acc = base + sum_e S_e w^e
      const cplx w{std::cos(theta_[var]), std::sin(theta_[var])};
      cw_.assign(maxe + 1, cplx{1, 0});
      for (std::uint32_t e = 1; e <= maxe; ++e) cw_[e] = cw_[e - 1] * std::conj(w);

      base_ = acc_;
      Se_.assign(maxe + 1, std::vector<cplx>(dim_, cplx{}));
      for (const auto& [k, e] : terms) {
        add_term(base_, k, -tv_[k]);
        tv_[k] *= cw_[e]; // now holds the var-free rest
        add_term(Se_[e], k, tv_[k]);
      }

      double best_here = best;
      double best_theta = theta_[var];
      for (int m = 0; m < kAscentAngles; ++m) {
        const double th = 2.0 * M_PI * m / kAscentAngles;
        const cplx z{std::cos(th), std::sin(th)};
        scratch_ = base_;
        cplx zp{1, 0};
        for (std::uint32_t e = 1; e <= maxe; ++e) {
          zp *= z;
          for (std::uint32_t j = 0; j < dim_; ++j) scratch_[j] += Se_[e][j] * zp;
        }
        const double val = vec_norm(scratch_);
        if (val > best_here) {
          best_here = val;
          best_theta = th;
        }
      }

      // re-attach the chosen angle
      theta_[var] = best_theta;
      const cplx wn{std::cos(best_theta), std::sin(best_theta)};
      cw_.assign(maxe + 1, cplx{1, 0});
      for (std::uint32_t e = 1; e <= maxe; ++e) cw_[e] = cw_[e - 1] * wn;
      acc_ = base_;
      for (std::uint32_t e = 1; e <= maxe; ++e)
        for (std::uint32_t j = 0; j < dim_; ++j) acc_[j] += Se_[e][j] * cw_[e];
      for (const auto& [k, e] : terms) tv_[k] *= cw_[e];
      best = std::max(best, vec_norm(acc_));
    }
    return best;
  }

  const DirichletTruncation& D_;
  const LiftEvaluator& ev_;
  CoefficientSpaceSpec space_;
  std::uint32_t dim_;
  std::vector<const Coefficient*> coeffs_;
  std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> terms_of_var_;
  std::vector<double> theta_;
  std::vector<cplx> tv_;
  std::vector<cplx> acc_, base_, scratch_;
  std::vector<std::vector<cplx>> Se_;
  std::vector<cplx> cw_;
};

} // namespace

McEstimate norm_dinf(const DirichletTruncation& D, const DinfSampler& sampler,
                     const PrimeTable& primes) {
  if (sampler.grid_points < 2) throw std::domain_error("dinf sampler: grid_points >= 2");
  if (sampler.torus_samples < 1) throw std::domain_error("dinf sampler: torus_samples >= 1");
  McEstimate out;
  out.samples = sampler.grid_points + sampler.torus_samples;
  if (D.empty()) return out;

  LiftEvaluator ev(D, primes);
  const auto& sup = D.support();
  const std::size_t T = ev.terms();
  const bool scalar = D.space().is_scalar();

  // dyadic level holding the vdc prefix
  const std::uint32_t L = std::max<std::uint32_t>(1, std::bit_width(sampler.grid_points - 1));
  const std::uint32_t M = 1u << L;
  const double dt = sampler.t_span / M;

  // line values at the arithmetic grid, scalar path via the kernels
  std::vector<double> line_vals(M, 0.0);
  if (scalar) {
    std::vector<double> ar(T), ai(T), cr(T, 1.0), ci(T, 0.0), sr(T), si(T);
    for (std::size_t k = 0; k < T; ++k) {
      const cplx a = sup[k].second.get(0);
      ar[k] = a.real();
      ai[k] = a.imag();
      const double ph = -dt * ev.log_n()[k];
      sr[k] = std::cos(ph);
      si[k] = std::sin(ph);
    }
    for (std::uint32_t j = 0; j < M; ++j) {
      line_vals[j] = std::abs(kern::cdot(ar.data(), ai.data(), cr.data(), ci.data(), T));
      kern::cmul(cr.data(), ci.data(), sr.data(), si.data(), T);
    }
  } else {
    std::vector<double> cr(T, 1.0), ci(T, 0.0), sr(T), si(T);
    for (std::size_t k = 0; k < T; ++k) {
      const double ph = -dt * ev.log_n()[k];
      sr[k] = std::cos(ph);
      si[k] = std::sin(ph);
    }
    std::vector<cplx> acc(D.space().dim);
    for (std::uint32_t j = 0; j < M; ++j) {
      std::fill(acc.begin(), acc.end(), cplx{});
      for (std::size_t k = 0; k < T; ++k) {
        const cplx ph{cr[k], ci[k]};
        for (const auto& [idx, v] : sup[k].second.entries()) acc[idx] += v * ph;
      }
      Coefficient c;
      for (std::uint32_t idx = 0; idx < acc.size(); ++idx)
        if (acc[idx] != cplx{}) c.set(idx, acc[idx]);
      line_vals[j] = space_norm(D.space(), c);
      kern::cmul(cr.data(), ci.data(), sr.data(), si.data(), T);
    }
  }

  // walk the vdc prefix; remember the best point of every dyadic sub-prefix
  double best = 0.0;
  std::vector<double> start_ts;
  double prefix_best = -1.0, prefix_best_t = 0.0;
  for (std::uint32_t i = 0; i < sampler.grid_points; ++i) {
    const std::uint32_t j = bit_reverse(i, L);
    const double t = dt * j;
    if (line_vals[j] > prefix_best) {
      prefix_best = line_vals[j];
      prefix_best_t = t;
    }
    best = std::max(best, line_vals[j]);
    if ((i + 1 & i) == 0) start_ts.push_back(prefix_best_t); // i+1 is a power of two
  }

  Ascent ascent(D, ev);
  const std::uint32_t d = ev.torus_dim();
  for (double t : start_ts) {
    const auto theta = ev.line_point(t);
    best = std::max(best, ascent.run(theta, sampler.refine_steps));
  }
  std::vector<double> theta(d);
  const std::uint64_t torus_seed = rng::substream(sampler.seed, 0x70);
  for (std::uint32_t s = 0; s < sampler.torus_samples; ++s) {
    for (std::uint32_t j = 0; j < d; ++j)
      theta[j] = rng::angle(torus_seed, std::uint64_t(s) * d + j);
    best = std::max(best, ascent.run(theta, sampler.refine_steps));
  }

  out.value = best;
  return out;
}

// --- weak norms and dual sampling ---------------------------------------------

std::vector<DualVector> dual_ball_candidates(const DirichletTruncation& D,
                                             std::uint32_t count, std::uint64_t seed) {
  const auto& space = D.space();
  if (space.is_scalar())
    throw std::domain_error("dual sampling needs a vector-kind series");
  const std::uint32_t d = space.dim;
  const double qp = space.dual_exponent();
  std::vector<DualVector> out;

  // per-coordinate dominant phase and column mass
  std::vector<cplx> dominant(d, cplx{1, 0});
  std::vector<double> dom_abs(d, 0.0), mass(d, 0.0);
  for (const auto& [n, a] : D.support())
    for (const auto& [j, v] : a.entries()) {
      const double m = std::abs(v);
      mass[j] += m;
      if (m > dom_abs[j]) {
        dom_abs[j] = m;
        dominant[j] = std::conj(v) / m;
      }
    }

  auto push_normalized = [&](std::vector<cplx> e) {
    DualVector x{std::move(e), qp};
    const double nn = x.norm();
    if (nn == 0.0) return;
    for (auto& v : x.entries) v /= nn;
    out.push_back(std::move(x));
  };

  std::vector<std::uint32_t> by_mass(d);
  for (std::uint32_t j = 0; j < d; ++j) by_mass[j] = j;
  std::stable_sort(by_mass.begin(), by_mass.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return mass[a] > mass[b]; });

  auto canonical = [&](std::uint32_t j) {
    std::vector<cplx> e(d, cplx{});
    e[j] = dominant[j];
    DualVector x{std::move(e), qp};
    out.push_back(std::move(x));
  };

  if (std::isinf(qp)) {
    // extreme points of the polydisc: phase vectors. Exact candidates:
    // all-ones and the per-coordinate aligned vector; then random signs/phases.
    out.push_back({std::vector<cplx>(d, cplx{1, 0}), qp});
    out.push_back({dominant, qp});
    for (std::uint32_t j = 0; j < std::min<std::uint32_t>(d, 4); ++j) canonical(by_mass[j]);
    const std::uint64_t s1 = rng::substream(seed, 1);
    const std::uint64_t s2 = rng::substream(seed, 2);
    for (std::uint32_t i = 0; i < count; ++i) {
      std::vector<cplx> e(d);
      for (std::uint32_t j = 0; j < d; ++j) {
        if (i % 2 == 0) {
          e[j] = cplx{rng::sign(s1, std::uint64_t(i) * d + j), 0};
        } else {
          const double th = rng::angle(s2, std::uint64_t(i) * d + j);
          e[j] = cplx{std::cos(th), std::sin(th)};
        }
      }
      out.push_back({std::move(e), qp});
    }
    return out;
  }

  if (qp == 1.0) {
    // extreme points of the l_1 ball: phased canonical directions; the
    // phase is immaterial for the scalar target norms, so the top-mass
    // coordinates form an exact pass when d is small.
    const std::uint32_t take = std::min<std::uint32_t>(d, std::max<std::uint32_t>(count, 16));
    for (std::uint32_t j = 0; j < take; ++j) canonical(by_mass[j]);
    return out;
  }

  // general q': canonical directions, the Holder-aligned vector (magnitudes
  // m_j^{1/(q'-1)} with the dominant phases: the exact maximizer of
  // sum_j m_j |x_j| over the q'-ball, so disjoint supports are covered),
  // normalized all-ones/aligned, random Gaussian directions on the q'-sphere
  for (std::uint32_t j = 0; j < std::min<std::uint32_t>(d, 8); ++j) canonical(by_mass[j]);
  {
    std::vector<cplx> holder(d, cplx{});
    for (std::uint32_t j = 0; j < d; ++j)
      if (mass[j] > 0) holder[j] = dominant[j] * std::pow(mass[j], 1.0 / (qp - 1.0));
    push_normalized(std::move(holder));
  }
  push_normalized(std::vector<cplx>(d, cplx{1, 0}));
  push_normalized(dominant);
  const std::uint64_t s3 = rng::substream(seed, 3);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::vector<cplx> e(d);
    for (std::uint32_t j = 0; j < d; ++j) e[j] = rng::gaussian(s3, std::uint64_t(i) * d + j);
    push_normalized(std::move(e));
  }
  return out;
}

McEstimate weak_norm(const DirichletTruncation& D, const NormTag& tag,
                     std::uint32_t dual_samples, std::uint64_t seed,
                     const SamplerSet& samplers, const PrimeTable& primes) {
  if (D.space().is_scalar())
    throw std::domain_error("weak norm: scalar-kind input (weak norm degenerates)");
  const auto cands = dual_ball_candidates(D, dual_samples, seed);
  McEstimate best;
  for (const auto& x : cands) {
    const DirichletTruncation Dx = apply_functional(D, x);
    const McEstimate m = norm(Dx, tag.plain(), samplers, primes);
    if (m.value > best.value) best = m;
  }
  return best;
}

McEstimate norm(const DirichletTruncation& D, const NormTag& tag,
                const SamplerSet& samplers, const PrimeTable& primes) {
  if (tag.weak)
    return weak_norm(D, tag, samplers.dual_samples, samplers.weak_seed, samplers, primes);
  switch (tag.family) {
    case NormTag::Family::ell1: return {norm_ell1(D), 0.0, 0};
    case NormTag::Family::ellinf: return {norm_ellinf(D), 0.0, 0};
    case NormTag::Family::csup: return {norm_csup(D), 0.0, 0};
    case NormTag::Family::dinf: return norm_dinf(D, samplers.dinf, primes);
    case NormTag::Family::hp: return norm_hp(D, tag.p, samplers.hp, primes);
  }
  throw std::logic_error("unreachable");
}

namespace {

DirichletTruncation truncate_to(const DirichletTruncation& D, std::uint64_t N) {
  DirichletTruncation out(D.space(), N);
  for (const auto& [n, a] : D.support()) {
    if (n > N) break;
    out.set(n, a);
  }
  return out;
}

} // namespace

ScheduledNorms norm_schedule(const DirichletTruncation& D, const NormTag& tag,
                             std::span<const std::uint64_t> schedule,
                             const SamplerSet& samplers, const PrimeTable& primes) {
  check_schedule(D, schedule);

  if (tag.weak) {
    if (D.space().is_scalar())
      throw std::domain_error("weak norm: scalar-kind input");
    const auto cands = dual_ball_candidates(D, samplers.dual_samples, samplers.weak_seed);
    ScheduledNorms out;
    out.values.assign(schedule.size(), 0.0);
    out.std_errors.assign(schedule.size(), 0.0);
    for (const auto& x : cands) {
      const DirichletTruncation Dx = apply_functional(D, x);
      const ScheduledNorms part = norm_schedule(Dx, tag.plain(), schedule, samplers, primes);
      out.samples = std::max(out.samples, part.samples);
      for (std::size_t s = 0; s < schedule.size(); ++s)
        if (part.values[s] > out.values[s]) {
          out.values[s] = part.values[s];
          out.std_errors[s] = part.std_errors[s];
        }
    }
    return out;
  }

  switch (tag.family) {
    case NormTag::Family::ell1:
    case NormTag::Family::ellinf:
    case NormTag::Family::csup:
      return exact_schedule(D, tag.family, schedule);
    case NormTag::Family::hp:
      return hp_schedule(D, tag.p, schedule, samplers.hp, primes);
    case NormTag::Family::dinf: {
      ScheduledNorms out;
      out.values.assign(schedule.size(), 0.0);
      out.std_errors.assign(schedule.size(), 0.0);
      for (std::size_t s = 0; s < schedule.size(); ++s) {
        const McEstimate m = norm_dinf(truncate_to(D, schedule[s]), samplers.dinf, primes);
        out.values[s] = m.value;
        out.samples = m.samples;
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

// --- admissibility --------------------------------------------------------------

AdmissibilityReport admissibility_check(const NormTag& tag, int trials,
                                        std::uint64_t seed, const SamplerSet& samplers,
                                        const PrimeTable& primes) {
  if (trials < 1) throw std::domain_error("admissibility_check: trials >= 1");
  AdmissibilityReport rep;
  rep.tolerance = tag.sampled() ? 0.05 : 1e-9;

  const std::uint64_t s0 = rng::substream(seed, 0xadc);
  for (int t = 0; t < trials; ++t) {
    const bool vector_case = tag.weak || (t % 3 == 2);
    const std::uint64_t n_max = 8 + rng::mix(s0, 3 * t) % 25;
    CoefficientSpaceSpec space = vector_case
                                     ? CoefficientSpaceSpec::lq(4, (t % 2) ? 2.0 : 1.0)
                                     : CoefficientSpaceSpec::scalar_space();
    DirichletTruncation P(space, n_max);
    const std::uint64_t st = rng::mix(s0, 1000 + t);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      if (vector_case) {
        Coefficient c;
        for (std::uint32_t j = 0; j < space.dim; ++j)
          c.set(j, rng::gaussian(st, n * space.dim + j));
        P.set(n, c);
      } else {
        P.set(n, Coefficient::scalar(rng::gaussian(st, n)));
      }
    }

    double sup = 0.0, sum = 0.0;
    for (const auto& [n, a] : P.support()) {
      const double m = space_norm(space, a);
      sup = std::max(sup, m);
      sum += m;
    }
    if (sum == 0.0) continue;
    const double nrm = norm(P, tag, samplers, primes).value;
    const double r1 = nrm / sup;
    const double r2 = nrm / sum;
    if (r1 < rep.c1) {
      rep.c1 = r1;
      rep.c1_witness = "trial " + std::to_string(t) + " (n_max=" + std::to_string(n_max) +
                       ", " + space.name() + ")";
    }
    if (r2 > rep.c2) {
      rep.c2 = r2;
      rep.c2_witness = rep.c1_witness.empty() ? "trial " + std::to_string(t)
                                              : "trial " + std::to_string(t) + " (n_max=" +
                                                    std::to_string(n_max) + ", " +
                                                    space.name() + ")";
    }
  }

  rep.ok = rep.c1 >= 0.5 - rep.tolerance && rep.c2 <= 1.0 + rep.tolerance;
  if (!rep.ok) {
    rep.message = "admissibility violation for " + tag.name() + ": c1=" +
                  std::to_string(rep.c1) + " at " + rep.c1_witness + ", c2=" +
                  std::to_string(rep.c2) + " at " + rep.c2_witness;
  }
  return rep;
}

} // namespace dirlab
