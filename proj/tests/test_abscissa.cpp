#include <doctest.h>

#include <cmath>

#include "dirlab/abscissa.hpp"
#include "dirlab/rng.hpp"

using namespace dirlab;

namespace {

const PrimeTable& table() {
  static PrimeTable t(100000);
  return t;
}

EstimatorParams params(std::uint64_t seed) {
  EstimatorParams p;
  p.samplers = SamplerSet::seeded(seed);
  return p;
}

DirichletTruncation ones_series(std::uint64_t n_max) {
  DirichletTruncation D(CoefficientSpaceSpec::scalar_space(), n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) D.set(n, Coefficient::scalar({1, 0}));
  return D;
}

DirichletTruncation alternating_series(std::uint64_t n_max) {
  DirichletTruncation D(CoefficientSpaceSpec::scalar_space(), n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n)
    D.set(n, Coefficient::scalar({n % 2 ? -1.0 : 1.0, 0}));
  return D;
}

const NormTag kEll1 = NormTag::make(NormTag::Family::ell1);
const NormTag kEllinf = NormTag::make(NormTag::Family::ellinf);
const NormTag kCsup = NormTag::make(NormTag::Family::csup);
const NormTag kH2 = NormTag::make(NormTag::Family::hp, 2.0);

} // namespace

TEST_CASE("dyadic_schedule shapes") {
  CHECK(dyadic_schedule(16) == std::vector<std::uint64_t>{2, 4, 8, 16});
  CHECK(dyadic_schedule(20) == std::vector<std::uint64_t>{2, 4, 8, 16, 20});
  CHECK(dyadic_schedule(1 << 14, 4) == std::vector<std::uint64_t>{2, 4, 8, 16});
  CHECK_THROWS_AS(dyadic_schedule(1), std::domain_error);
}

TEST_CASE("bohr_cahen examples") {
  const auto p = params(1);

  auto ones = ones_series(1024);
  const auto sched = dyadic_schedule(1024);
  // partial sums grow like N
  CHECK(bohr_cahen(ones, kCsup, sched, p, table()).value == doctest::Approx(1.0).epsilon(0.02));
  // p-series: sigma_a(zeta) = 1
  CHECK(bohr_cahen(ones, kEll1, sched, p, table()).value == doctest::Approx(1.0).epsilon(0.02));

  // bounded partial sums
  auto alt = alternating_series(1024);
  CHECK(bohr_cahen(alt, kCsup, sched, p, table()).value == doctest::Approx(0.0).epsilon(0.02));

  // zero norms at every N: -inf sentinel
  DirichletTruncation zero(CoefficientSpaceSpec::scalar_space(), 64);
  CHECK(bohr_cahen(zero, kEll1, dyadic_schedule(64), p, table()).value == -kInf);

  // a schedule shorter than 4 points is rejected
  const std::vector<std::uint64_t> tiny{2, 4, 8};
  CHECK_THROWS_AS(bohr_cahen(ones, kEll1, tiny, p, table()), std::domain_error);
}

TEST_CASE("bohr_cahen translation covariance in the nonnegative regime") {
  const auto p = params(2);
  auto ones = ones_series(2048);
  const auto sched = dyadic_schedule(2048);
  const auto base = bohr_cahen(ones, kEll1, sched, p, table());
  for (double sigma : {0.2, 0.5}) {
    const auto shifted = bohr_cahen(translate(ones, sigma), kEll1, sched, p, table());
    const double tol = 2 * (base.fit_residual + shifted.fit_residual) + 0.05;
    CHECK(std::abs(shifted.value - (base.value - sigma)) <= tol);
  }
}

TEST_CASE("bohr_cahen ordering between ell_inf, any tag, ell_1") {
  const auto p = params(3);
  for (int trial = 0; trial < 4; ++trial) {
    DirichletTruncation D(CoefficientSpaceSpec::scalar_space(), 512);
    for (std::uint64_t n = 1; n <= 512; ++n)
      D.set(n, Coefficient::scalar(rng::gaussian(50 + trial, n)));
    const auto sched = dyadic_schedule(512);
    const double lo = bohr_cahen(D, kEllinf, sched, p, table()).value;
    const double mid = bohr_cahen(D, kCsup, sched, p, table()).value;
    const double hi = bohr_cahen(D, kEll1, sched, p, table()).value;
    CHECK(lo <= mid + 0.1);
    CHECK(mid <= hi + 0.1);
    CHECK(hi - lo <= 1.0 + 0.1); // width cap sigma_l1 <= sigma_linf + 1
  }
}

TEST_CASE("bounded_bisection examples") {
  const auto p = params(4);
  const std::uint64_t n_max = 16384;
  const auto sched = dyadic_schedule(n_max);

  // zeta truncation: the harmonic boundary converges slowest, so the slope
  // proxy carries a tolerance-dependent offset; at growth_tol 0.1 the
  // crossing sits at ~1
  auto ones = ones_series(n_max);
  const auto e1 = bounded_bisection(ones, kEll1, 0.0, 2.0, 30, 0.1, sched, p, table());
  CHECK(e1.value == doctest::Approx(1.0).epsilon(0.15));
  CHECK(e1.method == AbscissaMethod::bounded_bisection);
  CHECK(e1.diagnostics.count("slope_at_lo"));
  CHECK(e1.diagnostics.count("growth_tol"));
  // crossing property: just-bounded above, just-unbounded below
  CHECK(e1.diagnostics.at("slope_at_hi") <= 0.1);
  CHECK(e1.diagnostics.at("slope_at_lo") > 0.1);

  // the default threshold classifies tighter but overshoots on zeta
  const auto tight = bounded_bisection(ones, kEll1, 0.0, 2.0, 30, 0.02, sched, p, table());
  CHECK(tight.value > 1.0);
  CHECK(tight.value < 1.6);

  auto alt = alternating_series(n_max);
  CHECK(bounded_bisection(alt, kCsup, -1.0, 1.0, 30, 0.05, sched, p, table()).value ==
        doctest::Approx(0.0).epsilon(0.2));

  // a_n = n^{1/2}: translated coefficients bounded iff sigma >= 1/2
  DirichletTruncation sq(CoefficientSpaceSpec::scalar_space(), n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n)
    sq.set(n, Coefficient::scalar({std::sqrt(double(n)), 0}));
  CHECK(bounded_bisection(sq, kEllinf, 0.0, 1.0, 30, 0.05, sched, p, table()).value ==
        doctest::Approx(0.5).epsilon(0.15));

  // both endpoints classify the same way: bracket error
  CHECK_THROWS_WITH_AS(
      bounded_bisection(ones, kEll1, 1.7, 2.0, 8, 0.02, sched, p, table()),
      doctest::Contains("bracketing failure"), std::runtime_error);
}

TEST_CASE("weak_abscissa examples") {
  const auto p = params(5);

  // sum e_n n^{-s} in the l1 model: weak H2 abscissa 1/2 at the sign vectors
  const std::uint32_t d = 64;
  DirichletTruncation D(CoefficientSpaceSpec::lq(d, 1.0), d);
  for (std::uint32_t n = 1; n <= d; ++n) D.set(n, Coefficient::basis(n - 1, {1, 0}));
  const auto sched = dyadic_schedule(d);
  const auto est = weak_abscissa(D, kH2, 16, 7, sched, p, table());
  CHECK(est.value == doctest::Approx(0.5).epsilon(0.05));
  CHECK(est.method == AbscissaMethod::weak_sup);
  CHECK(est.diagnostics.count("argmax_candidate"));

  // single nonzero coefficient: flat norms, slope 0
  DirichletTruncation single(CoefficientSpaceSpec::lq(4, 2.0), 64);
  single.set(3, Coefficient::basis(1, {1, 0}));
  const auto lone = weak_abscissa(single, kCsup, 8, 7, dyadic_schedule(64), p, table());
  CHECK(lone.value == doctest::Approx(0.0).epsilon(0.05));

  // rank-one series: weak value equals the scalar estimate
  DirichletTruncation rank1(CoefficientSpaceSpec::lq(3, 2.0), 256);
  DirichletTruncation scal(CoefficientSpaceSpec::scalar_space(), 256);
  for (std::uint64_t n = 1; n <= 256; ++n) {
    const cplx v = rng::gaussian(9, n);
    rank1.set(n, Coefficient::basis(0, v));
    scal.set(n, Coefficient::scalar(v));
  }
  const auto schedr = dyadic_schedule(256);
  const auto weak_est = weak_abscissa(rank1, kCsup, 12, 3, schedr, p, table());
  const auto scal_est = bohr_cahen(scal, kCsup, schedr, p, table());
  CHECK(std::abs(weak_est.value - scal_est.value) <= 0.05);

  CHECK_THROWS_AS(weak_abscissa(scal, kCsup, 8, 1, schedr, p, table()), std::domain_error);
}

TEST_CASE("weak equals plain for csup on random vector series (kina)") {
  // the weak-norm route: the dual sup commutes with the partial-sum sup,
  // which is exactly how the corollary identifies c^weak(X) with c(X)
  const auto p = params(6);
  const NormTag weak_csup = NormTag::make(NormTag::Family::csup, 2.0, true);
  for (int trial = 0; trial < 3; ++trial) {
    DirichletTruncation D(CoefficientSpaceSpec::lq(8, 2.0), 2048);
    for (std::uint64_t n = 1; n <= 2048; ++n) {
      Coefficient c;
      for (std::uint32_t j = 0; j < 8; ++j) c.set(j, rng::gaussian(70 + trial, n * 8 + j));
      D.set(n, c);
    }
    const auto sched = dyadic_schedule(2048);
    const double plain = bohr_cahen(D, kCsup, sched, p, table()).value;
    const double weak = bohr_cahen(D, weak_csup, sched, p, table()).value;
    CHECK(std::abs(plain - weak) <= 0.1);
  }
}

TEST_CASE("unconditional_abscissa examples") {
  const auto p = params(7);

  // scalar alternating: worst signs undo the cancellation
  auto alt = alternating_series(512);
  const auto sched = dyadic_schedule(512);
  const auto est = unconditional_abscissa(alt, SignStrategy::random, 8, 3, sched, p, table());
  CHECK(est.value == doctest::Approx(1.0).epsilon(0.05));
  CHECK(est.method == AbscissaMethod::sign_search);
  CHECK(est.diagnostics.count("sign_path"));

  // disjoint supports in the l2 model: signs cannot matter
  DirichletTruncation P(CoefficientSpaceSpec::lq(100, 2.0), 541);
  std::uint32_t slot = 0;
  for (std::size_t k = 1; table().nth_prime(k) <= 541; ++k) {
    const std::uint64_t pr = table().nth_prime(k);
    P.set(pr, Coefficient::basis(slot++, {std::pow(double(pr), -0.5), 0}));
  }
  const auto estp =
      unconditional_abscissa(P, SignStrategy::random, 6, 5, dyadic_schedule(541), p, table());
  CHECK(estp.value <= 0.12);
  CHECK(estp.diagnostics.count("weak_path"));

  // zero series: sentinel
  DirichletTruncation zero(CoefficientSpaceSpec::scalar_space(), 64);
  CHECK(unconditional_abscissa(zero, SignStrategy::random, 4, 1, dyadic_schedule(64), p,
                               table())
            .value == -kInf);

  // exhaustive only up to n_max = 20
  auto small = alternating_series(12);
  const std::vector<std::uint64_t> ssched{2, 4, 8, 12};
  const auto ex =
      unconditional_abscissa(small, SignStrategy::exhaustive, 0, 0, ssched, p, table());
  CHECK(ex.value >= 0.8); // aligned signs give linear growth even at n = 12
  auto big = alternating_series(32);
  CHECK_THROWS_AS(unconditional_abscissa(big, SignStrategy::exhaustive, 0, 0,
                                         dyadic_schedule(32), p, table()),
                  std::length_error);
}

TEST_CASE("cotype cap on the unconditional gap") {
  const auto p = params(8);
  for (int trial = 0; trial < 3; ++trial) {
    DirichletTruncation D(CoefficientSpaceSpec::lq(8, 2.0), 256);
    for (std::uint64_t n = 1; n <= 256; ++n) {
      Coefficient c;
      for (std::uint32_t j = 0; j < 8; ++j) c.set(j, rng::gaussian(90 + trial, n * 8 + j));
      D.set(n, c);
    }
    const auto sched = dyadic_schedule(256);
    const double sa = bohr_cahen(D, kEll1, sched, p, table()).value;
    const double su =
        unconditional_abscissa(D, SignStrategy::random, 6, 2, sched, p, table()).value;
    const double cap = 1.0 - 1.0 / D.space().nominal_cotype();
    CHECK(sa - su <= cap + 0.15);
  }
}

TEST_CASE("strip_report examples") {
  const auto p = params(9);
  const auto sched = dyadic_schedule(1024);

  auto ones = ones_series(1024);
  const auto r1 = strip_report(ones, kEll1, kCsup, sched, p, table());
  CHECK(r1.first.value == doctest::Approx(1.0).epsilon(0.03));
  CHECK(r1.second.value == doctest::Approx(1.0).epsilon(0.03));
  CHECK(r1.width == doctest::Approx(0.0).epsilon(0.05));

  auto alt = alternating_series(1024);
  const auto r2 = strip_report(alt, kEll1, kCsup, sched, p, table());
  CHECK(r2.width == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("strip_exponent examples") {
  auto p = params(10);
  p.samplers.hp.mc_samples = 512;
  const std::vector<std::uint64_t> Ns{16, 32, 64, 128, 256};

  // identical tags: ratio 1, exponent 0
  const auto same = strip_exponent(kEll1, kEll1, Ns, 4, 3, p, table());
  CHECK(same.exponent == doctest::Approx(0.0).epsilon(0.01));
  CHECK(!same.assumption.empty());

  // (ell1, H2): ratio N/sqrt(N) for unit signs, exponent 1/2 exactly
  const auto half = strip_exponent(kEll1, kH2, Ns, 4, 3, p, table());
  CHECK(half.exponent == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("H_p abscissas agree across p (hypercontractivity)") {
  auto p = params(11);
  p.samplers.hp.mc_samples = 4096;
  const auto sched = dyadic_schedule(512);
  for (int trial = 0; trial < 2; ++trial) {
    DirichletTruncation D(CoefficientSpaceSpec::scalar_space(), 512);
    for (std::uint64_t n = 1; n <= 512; ++n) {
      const double v = rng::sign(600 + trial, n) * std::pow(double(n), -0.5);
      D.set(n, Coefficient::scalar({v, 0}));
    }
    const double e1 =
        bohr_cahen(D, NormTag::make(NormTag::Family::hp, 1.0), sched, p, table()).value;
    const double e2 = bohr_cahen(D, kH2, sched, p, table()).value;
    const double e4 =
        bohr_cahen(D, NormTag::make(NormTag::Family::hp, 4.0), sched, p, table()).value;
    CHECK(std::abs(e1 - e2) <= 0.1);
    CHECK(std::abs(e2 - e4) <= 0.1);
    CHECK(std::abs(e1 - e4) <= 0.1);
  }
}

TEST_CASE("weak-wrapper Bohr-Cahen agrees with the dual-sup route") {
  // the weak-space abscissa equals the weak abscissa; on the canonical-basis
  // series both estimators resolve to the same sign-vector maximizer
  const auto p = params(12);
  const std::uint32_t d = 256;
  DirichletTruncation D(CoefficientSpaceSpec::lq(d, 1.0), d);
  for (std::uint32_t n = 1; n <= d; ++n) D.set(n, Coefficient::basis(n - 1, {1, 0}));
  const auto sched = dyadic_schedule(d);
  const NormTag weak_h2 = NormTag::make(NormTag::Family::hp, 2.0, true);
  const double via_wrapper = bohr_cahen(D, weak_h2, sched, p, table()).value;
  const double via_sup = weak_abscissa(D, kH2, p.samplers.dual_samples,
                                       p.samplers.weak_seed, sched, p, table()).value;
  CHECK(via_wrapper == doctest::Approx(0.5).epsilon(0.05));
  CHECK(via_sup == doctest::Approx(0.5).epsilon(0.05));
  CHECK(std::abs(via_wrapper - via_sup) <= 0.05);
}
