#include "dirlab/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dirlab {

void TorusPolynomial::set(const MultiIndex& alpha, Coefficient c) {
  auto it = std::lower_bound(terms.begin(), terms.end(), alpha,
                             [](const auto& e, const MultiIndex& a) { return e.first < a; });
  if (it != terms.end() && it->first == alpha) {
    if (c.is_zero())
      terms.erase(it);
    else
      it->second = std::move(c);
  } else if (!c.is_zero()) {
    terms.insert(it, {alpha, std::move(c)});
  }
  var_count = 0;
  for (const auto& [a, cc] : terms)
    var_count = std::max(var_count, static_cast<std::uint32_t>(a.size()));
}

const Coefficient* TorusPolynomial::find(const MultiIndex& alpha) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), alpha,
                             [](const auto& e, const MultiIndex& a) { return e.first < a; });
  if (it == terms.end() || !(it->first == alpha)) return nullptr;
  return &it->second;
}

TorusPolynomial bohr_lift(const DirichletTruncation& D, const PrimeTable& primes) {
  TorusPolynomial Q;
  Q.space = D.space();
  for (const auto& [n, a] : D.support()) {
    MultiIndex alpha = primes.factorize(n);
    Q.var_count = std::max(Q.var_count, static_cast<std::uint32_t>(alpha.size()));
    Q.terms.push_back({std::move(alpha), a});
  }
  std::sort(Q.terms.begin(), Q.terms.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return Q;
}

DirichletTruncation bohr_project(const TorusPolynomial& Q, const PrimeTable& primes) {
  std::uint64_t n_max = 1;
  std::vector<std::pair<std::uint64_t, const Coefficient*>> flat;
  flat.reserve(Q.terms.size());
  for (const auto& [alpha, c] : Q.terms) {
    const std::uint64_t n = primes.compose(alpha);
    n_max = std::max(n_max, n);
    flat.push_back({n, &c});
  }
  DirichletTruncation D(Q.space, n_max);
  for (const auto& [n, c] : flat) D.set(n, *c);
  return D;
}

TorusPolynomial apply_Tr(const TorusPolynomial& Q, const RadiusVector& r) {
  if (r.radii.size() < Q.var_count)
    throw std::domain_error("apply_Tr: radius vector shorter than var_count");
  for (double rk : r.radii)
    if (!(rk >= 0.0 && rk < 1.0))
      throw std::domain_error("apply_Tr: radii must lie in [0, 1)");
  TorusPolynomial out;
  out.space = Q.space;
  out.var_count = Q.var_count;
  out.terms.reserve(Q.terms.size());
  for (const auto& [alpha, c] : Q.terms) {
    double f = 1.0;
    for (std::size_t k = 0; k < alpha.size(); ++k)
      if (alpha.exponents[k])
        f *= std::pow(r.radii[k], static_cast<double>(alpha.exponents[k]));
    Coefficient scaled = c * cplx{f, 0};
    if (!scaled.is_zero()) out.terms.push_back({alpha, std::move(scaled)});
  }
  return out;
}

DirichletTruncation apply_M_eps(const DirichletTruncation& D, double eps,
                                const PrimeTable& primes) {
  if (!(eps > 0)) throw std::domain_error("apply_M_eps: eps must be positive");
  TorusPolynomial Q = bohr_lift(D, primes);
  RadiusVector r;
  r.radii.resize(Q.var_count);
  for (std::uint32_t k = 0; k < Q.var_count; ++k)
    r.radii[k] = std::pow(static_cast<double>(primes.nth_prime(k + 1)), -eps);
  DirichletTruncation out = bohr_project(apply_Tr(Q, r), primes);
  // projection recomputes n_max from the surviving support; restore the tail
  DirichletTruncation padded(D.space(), D.n_max());
  for (const auto& [n, a] : out.support()) padded.set(n, a);
  return padded;
}

DirichletTruncation dirichlet_product(const DirichletTruncation& A,
                                      const DirichletTruncation& B,
                                      std::uint64_t n_max) {
  if (!A.space().is_scalar() || !B.space().is_scalar())
    throw std::domain_error("dirichlet_product: scalar series only");
  std::map<std::uint64_t, cplx> acc;
  for (const auto& [n, a] : A.support()) {
    if (n > n_max) break;
    for (const auto& [m, b] : B.support()) {
      if (n * m > n_max) break;
      acc[n * m] += a.get(0) * b.get(0);
    }
  }
  DirichletTruncation out(CoefficientSpaceSpec::scalar_space(), n_max);
  for (const auto& [n, v] : acc)
    if (v != cplx{}) out.set(n, Coefficient::scalar(v));
  return out;
}

// --- LiftEvaluator ------------------------------------------------------------

LiftEvaluator::LiftEvaluator(const DirichletTruncation& D, const PrimeTable& primes) {
  n_.reserve(D.support_size());
  std::map<std::uint64_t, std::uint32_t> prime_slot; // prime -> compact var id

  std::vector<std::vector<std::pair<std::uint64_t, std::uint32_t>>> raw; // (prime, exp)
  raw.reserve(D.support_size());
  for (const auto& [n, a] : D.support()) {
    n_.push_back(n);
    log_n_.push_back(std::log(static_cast<double>(n)));
    MultiIndex alpha = primes.factorize(n);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> fs;
    for (std::size_t k = 0; k < alpha.size(); ++k)
      if (alpha.exponents[k]) {
        const std::uint64_t p = primes.nth_prime(k + 1);
        fs.push_back({p, alpha.exponents[k]});
        prime_slot.emplace(p, 0);
      }
    raw.push_back(std::move(fs));
  }

  used_primes_.reserve(prime_slot.size());
  for (auto& [p, slot] : prime_slot) {
    slot = static_cast<std::uint32_t>(used_primes_.size());
    used_primes_.push_back(p);
    log_used_primes_.push_back(std::log(static_cast<double>(p)));
  }
  max_exp_.assign(used_primes_.size(), 0);

  factor_begin_.reserve(raw.size() + 1);
  factor_begin_.push_back(0);
  for (const auto& fs : raw) {
    for (const auto& [p, e] : fs) {
      const std::uint32_t var = prime_slot[p];
      factors_.push_back({var, e});
      max_exp_[var] = std::max(max_exp_[var], e);
    }
    factor_begin_.push_back(static_cast<std::uint32_t>(factors_.size()));
  }
}

std::span<const LiftEvaluator::TermFactor> LiftEvaluator::term_factors(std::size_t k) const {
  return {factors_.data() + factor_begin_[k],
          factors_.data() + factor_begin_[k + 1]};
}

void LiftEvaluator::term_values(std::span<const double> theta, std::vector<cplx>& out) const {
  const std::size_t d = used_primes_.size();
  // powers w_j^e computed once per variable up to the max exponent seen
  static thread_local std::vector<std::vector<cplx>> powers;
  powers.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    auto& pw = powers[j];
    pw.assign(max_exp_[j] + 1, cplx{1, 0});
    const cplx w{std::cos(theta[j]), std::sin(theta[j])};
    for (std::uint32_t e = 1; e <= max_exp_[j]; ++e) pw[e] = pw[e - 1] * w;
  }
  out.assign(n_.size(), cplx{1, 0});
  for (std::size_t k = 0; k < n_.size(); ++k) {
    cplx v{1, 0};
    for (const auto& f : term_factors(k)) v *= powers[f.var][f.exp];
    out[k] = v;
  }
}

std::vector<double> LiftEvaluator::line_point(double t) const {
  std::vector<double> theta(used_primes_.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    double a = std::fmod(-t * log_used_primes_[j], 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    theta[j] = a;
  }
  return theta;
}

} // namespace dirlab
