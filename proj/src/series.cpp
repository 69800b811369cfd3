#include "dirlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dirlab {

namespace {

// n^{-z} for complex z
cplx npow(std::uint64_t n, cplx z) {
  const double ln = std::log(static_cast<double>(n));
  return std::exp(cplx{-z.real() * ln, -z.imag() * ln});
}

} // namespace

// --- CoefficientSpaceSpec ---------------------------------------------------

CoefficientSpaceSpec CoefficientSpaceSpec::lq(std::uint32_t dim, double q) {
  if (dim == 0) throw std::domain_error("space: dim must be positive");
  if (!(q >= 1.0)) throw std::domain_error("space: q must lie in [1, inf]");
  CoefficientSpaceSpec s;
  s.kind = Kind::vector;
  s.dim = dim;
  s.q = q;
  return s;
}

double CoefficientSpaceSpec::nominal_cotype() const {
  if (kind == Kind::scalar) return 2.0;
  if (std::isinf(q)) return kInf;
  return std::max(q, 2.0);
}

double CoefficientSpaceSpec::dual_exponent() const {
  if (q == 1.0) return kInf;
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

std::string CoefficientSpaceSpec::name() const {
  if (kind == Kind::scalar) return "scalar";
  std::string qs = std::isinf(q) ? "inf" : std::to_string(q);
  qs.erase(qs.find_last_not_of('0') + 1);
  if (!qs.empty() && qs.back() == '.') qs.pop_back();
  return "l" + qs + "^" + std::to_string(dim);
}

// --- Coefficient ------------------------------------------------------------

Coefficient Coefficient::basis(std::uint32_t j, cplx v) {
  Coefficient c;
  if (v != cplx{}) c.entries_.push_back({j, v});
  return c;
}

Coefficient Coefficient::dense(std::span<const cplx> values) {
  Coefficient c;
  for (std::uint32_t j = 0; j < values.size(); ++j)
    if (values[j] != cplx{}) c.entries_.push_back({j, values[j]});
  return c;
}

cplx Coefficient::get(std::uint32_t j) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                             [](const Entry& e, std::uint32_t k) { return e.first < k; });
  if (it == entries_.end() || it->first != j) return {};
  return it->second;
}

void Coefficient::set(std::uint32_t j, cplx v) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                             [](const Entry& e, std::uint32_t k) { return e.first < k; });
  if (it != entries_.end() && it->first == j) {
    if (v == cplx{})
      entries_.erase(it);
    else
      it->second = v;
  } else if (v != cplx{}) {
    entries_.insert(it, {j, v});
  }
}

std::uint32_t Coefficient::min_dim() const {
  return entries_.empty() ? 0 : entries_.back().first + 1;
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  if (o.entries_.empty()) return *this;
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + o.entries_.size());
  auto a = entries_.begin();
  auto b = o.entries_.begin();
  while (a != entries_.end() || b != o.entries_.end()) {
    if (b == o.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      const cplx v = a->second + b->second;
      if (v != cplx{}) merged.push_back({a->first, v});
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
  return *this;
}

Coefficient& Coefficient::operator*=(cplx s) {
  if (s == cplx{}) {
    entries_.clear();
    return *this;
  }
  for (auto& [j, v] : entries_) v *= s;
  return *this;
}

double space_norm(const CoefficientSpaceSpec& space, const Coefficient& a) {
  if (a.is_zero()) return 0.0;
  if (space.is_scalar()) return std::abs(a.get(0));
  if (std::isinf(space.q)) {
    double best = 0.0;
    for (const auto& [j, v] : a.entries()) best = std::max(best, std::abs(v));
    return best;
  }
  if (space.q == 2.0) {
    double s = 0.0;
    for (const auto& [j, v] : a.entries()) s += std::norm(v);
    return std::sqrt(s);
  }
  if (space.q == 1.0) {
    double s = 0.0;
    for (const auto& [j, v] : a.entries()) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  for (const auto& [j, v] : a.entries()) s += std::pow(std::abs(v), space.q);
  return std::pow(s, 1.0 / space.q);
}

// --- DualVector -------------------------------------------------------------

cplx DualVector::apply(const Coefficient& a) const {
  cplx acc{};
  for (const auto& [j, v] : a.entries()) {
    if (j >= entries.size())
      throw std::domain_error("dual vector dimension does not match coefficient support");
    acc += entries[j] * v;
  }
  return acc;
}

double DualVector::norm() const {
  if (std::isinf(norm_exponent)) {
    double best = 0.0;
    for (const auto& v : entries) best = std::max(best, std::abs(v));
    return best;
  }
  double s = 0.0;
  for (const auto& v : entries) s += std::pow(std::abs(v), norm_exponent);
  return std::pow(s, 1.0 / norm_exponent);
}

// --- DirichletTruncation ----------------------------------------------------

DirichletTruncation::DirichletTruncation(CoefficientSpaceSpec space, std::uint64_t n_max)
    : space_(space), n_max_(n_max) {
  if (n_max_ == 0) throw std::domain_error("n_max must be positive");
}

void DirichletTruncation::set(std::uint64_t n, Coefficient c) {
  if (n == 0 || n > n_max_)
    throw std::out_of_range("coefficient index n out of [1, n_max]");
  auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), n,
                             [](const Entry& e, std::uint64_t k) { return e.first < k; });
  if (it != coeffs_.end() && it->first == n) {
    if (c.is_zero())
      coeffs_.erase(it);
    else
      it->second = std::move(c);
  } else if (!c.is_zero()) {
    coeffs_.insert(it, {n, std::move(c)});
  }
}

const Coefficient* DirichletTruncation::find(std::uint64_t n) const {
  auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), n,
                             [](const Entry& e, std::uint64_t k) { return e.first < k; });
  if (it == coeffs_.end() || it->first != n) return nullptr;
  return &it->second;
}

Coefficient DirichletTruncation::at(std::uint64_t n) const {
  const Coefficient* c = find(n);
  return c ? *c : Coefficient{};
}

// --- operations -------------------------------------------------------------

DirichletTruncation translate(const DirichletTruncation& D, double sigma) {
  DirichletTruncation out(D.space(), D.n_max());
  for (const auto& [n, a] : D.support())
    out.set(n, a * cplx{std::pow(static_cast<double>(n), -sigma), 0.0});
  return out;
}

Coefficient evaluate_partial(const DirichletTruncation& D, cplx s, std::uint64_t N) {
  if (N > D.n_max()) throw std::out_of_range("evaluate_partial: N exceeds n_max");
  Coefficient acc;
  for (const auto& [n, a] : D.support()) {
    if (n > N) break;
    acc += a * npow(n, s);
  }
  return acc;
}

double abel_identity_residual(const DirichletTruncation& D, double sigma, double eps,
                              std::uint64_t M, std::uint64_t N, cplx s) {
  if (!(1 <= M && M < N - 1 && N <= D.n_max()))
    throw std::out_of_range("abel_identity_residual: need 1 <= M < N-1 <= n_max-1");
  if (!(eps > 0)) throw std::domain_error("abel_identity_residual: eps must be positive");

  // prefix sums S_n = sum_{k<=n} a_k k^{-(sigma+s)}
  std::vector<Coefficient> S(N + 1);
  {
    Coefficient acc;
    std::size_t idx = 0;
    const auto& sup = D.support();
    for (std::uint64_t n = 1; n <= N; ++n) {
      while (idx < sup.size() && sup[idx].first == n) {
        acc += sup[idx].second * npow(n, cplx{sigma, 0} + s);
        ++idx;
      }
      S[n] = acc;
    }
  }

  Coefficient lhs;
  for (const auto& [n, a] : D.support()) {
    if (n <= M) continue;
    if (n > N) break;
    lhs += a * npow(n, cplx{sigma + eps, 0} + s);
  }

  Coefficient rhs = S[N] * cplx{std::pow(static_cast<double>(N), -eps), 0};
  rhs += S[M] * cplx{-std::pow(static_cast<double>(M), -eps), 0};
  for (std::uint64_t n = M; n + 1 <= N; ++n) {
    const double w = std::pow(static_cast<double>(n), -eps) -
                     std::pow(static_cast<double>(n + 1), -eps);
    rhs += S[n] * cplx{w, 0};
  }

  rhs *= cplx{-1, 0};
  lhs += rhs;
  return space_norm(D.space(), lhs);
}

double abel_resummation_residual(const DirichletTruncation& D, double sigma0,
                                 std::uint64_t N, cplx s) {
  if (!(1 <= N && N <= D.n_max()))
    throw std::out_of_range("abel_resummation_residual: need 1 <= N <= n_max");

  std::vector<Coefficient> T(N + 1);
  {
    Coefficient acc;
    std::size_t idx = 0;
    const auto& sup = D.support();
    for (std::uint64_t n = 1; n <= N; ++n) {
      while (idx < sup.size() && sup[idx].first == n) {
        acc += sup[idx].second * npow(n, cplx{sigma0, 0} + s);
        ++idx;
      }
      T[n] = acc;
    }
  }

  Coefficient lhs = evaluate_partial(D, s, N);

  Coefficient rhs = T[N] * cplx{std::pow(static_cast<double>(N), sigma0), 0};
  for (std::uint64_t n = 1; n + 1 <= N; ++n) {
    const double w = std::pow(static_cast<double>(n), sigma0) -
                     std::pow(static_cast<double>(n + 1), sigma0);
    rhs += T[n] * cplx{w, 0};
  }

  rhs *= cplx{-1, 0};
  lhs += rhs;
  return space_norm(D.space(), lhs);
}

DirichletTruncation apply_functional(const DirichletTruncation& D, const DualVector& xstar) {
  if (D.space().is_scalar())
    throw std::domain_error("apply_functional: series is already scalar");
  if (xstar.entries.size() < D.space().dim)
    throw std::domain_error("apply_functional: dual vector dimension mismatch");
  DirichletTruncation out(CoefficientSpaceSpec::scalar_space(), D.n_max());
  for (const auto& [n, a] : D.support())
    out.set(n, Coefficient::scalar(xstar.apply(a)));
  return out;
}

DirichletTruncation homogeneous_part(const DirichletTruncation& D, std::uint64_t m) {
  DirichletTruncation out(D.space(), D.n_max());
  for (const auto& [n, a] : D.support()) {
    // Omega(n) by direct division; support indices are modest
    std::uint64_t r = n, count = 0;
    for (std::uint64_t p = 2; p * p <= r; p += (p == 2 ? 1 : 2))
      while (r % p == 0) {
        r /= p;
        ++count;
      }
    if (r > 1) ++count;
    if (count == m) out.set(n, a);
  }
  return out;
}

DirichletTruncation combine_with_direction(const DirichletTruncation& D1,
                                           const DirichletTruncation& D2,
                                           const Coefficient& x0) {
  if (!D2.space().is_scalar())
    throw std::domain_error("combine_with_direction: D2 must be scalar");
  if (x0.entries().size() != 1)
    throw std::domain_error("combine_with_direction: x0 must be a single-coordinate vector");
  const auto [j0, v0] = x0.entries().front();
  if (std::abs(std::abs(v0) - 1.0) > 1e-12)
    throw std::domain_error("combine_with_direction: x0 must have unit norm");
  if (D1.space().is_scalar())
    throw std::domain_error("combine_with_direction: D1 must be vector-valued");
  for (const auto& [n, a] : D1.support())
    if (a.get(j0) != cplx{})
      throw std::domain_error("combine_with_direction: D1 meets x0's coordinate at n=" +
                              std::to_string(n));

  const std::uint64_t n_max = std::max(D1.n_max(), D2.n_max());
  CoefficientSpaceSpec ambient = D1.space();
  ambient.dim = std::max(ambient.dim, j0 + 1);
  DirichletTruncation out(ambient, n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    Coefficient c = D1.find(n) ? *D1.find(n) : Coefficient{};
    if (const Coefficient* lam = D2.find(n)) c += x0 * lam->get(0);
    if (!c.is_zero()) out.set(n, c);
  }
  return out;
}

} // namespace dirlab
