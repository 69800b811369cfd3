#include <doctest.h>

#include <cmath>

#include "dirlab/norms.hpp"
#include "dirlab/rng.hpp"

using namespace dirlab;

namespace {

const PrimeTable& table() {
  static PrimeTable t(100000);
  return t;
}

DirichletTruncation scalar_series(std::initializer_list<double> values) {
  DirichletTruncation D(CoefficientSpaceSpec::scalar_space(), values.size());
  std::uint64_t n = 1;
  for (double v : values) D.set(n++, Coefficient::scalar({v, 0}));
  return D;
}

DirichletTruncation random_scalar(std::uint64_t n_max, std::uint64_t seed) {
  DirichletTruncation D(CoefficientSpaceSpec::scalar_space(), n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n)
    D.set(n, Coefficient::scalar(rng::gaussian(seed, n)));
  return D;
}

} // namespace

TEST_CASE("norm tags") {
  CHECK(NormTag::make(NormTag::Family::hp, kInf).family == NormTag::Family::dinf);
  CHECK(NormTag::parse("hp", 2.0).name() == "hp(2)");
  CHECK(NormTag::make(NormTag::Family::ell1, 2.0, true).name() == "weak-ell1");
  CHECK_THROWS_AS(NormTag::parse("nope"), std::domain_error);
}

TEST_CASE("ell1 / ellinf / csup examples") {
  DirichletTruncation zero(CoefficientSpaceSpec::scalar_space(), 5);
  CHECK(norm_ell1(zero) == 0.0);
  CHECK(norm_ellinf(zero) == 0.0);

  CHECK(norm_ell1(scalar_series({1, -1, 1})) == doctest::Approx(3.0));

  DirichletTruncation v(CoefficientSpaceSpec::lq(2, 2.0), 1);
  Coefficient c;
  c.set(0, {3, 0});
  c.set(1, {4, 0});
  v.set(1, c);
  CHECK(norm_ell1(v) == doctest::Approx(5.0));

  CHECK(norm_ellinf(scalar_series({1, 2, 0.5})) == doctest::Approx(2.0));
  DirichletTruncation harmonic(CoefficientSpaceSpec::scalar_space(), 100);
  for (std::uint64_t n = 1; n <= 100; ++n)
    harmonic.set(n, Coefficient::scalar({1.0 / n, 0}));
  CHECK(norm_ellinf(harmonic) == doctest::Approx(1.0));

  CHECK(norm_csup(scalar_series({1, -1})) == doctest::Approx(1.0));
  CHECK(norm_csup(scalar_series({1, 1, 1})) == doctest::Approx(3.0));
  DirichletTruncation alt(CoefficientSpaceSpec::scalar_space(), 10);
  for (std::uint64_t n = 1; n <= 10; ++n)
    alt.set(n, Coefficient::scalar({n % 2 ? -1.0 : 1.0, 0}));
  CHECK(norm_csup(alt) == doctest::Approx(1.0));
}

TEST_CASE("dinf norm examples") {
  DinfSampler s;
  s.seed = 5;

  DirichletTruncation c(CoefficientSpaceSpec::scalar_space(), 1);
  c.set(1, Coefficient::scalar({-2.5, 1.0}));
  CHECK(norm_dinf(c, s, table()).value == doctest::Approx(std::abs(cplx{-2.5, 1.0})));

  // 1 + 2^{-s}: maximum 2 at t = 0
  DirichletTruncation plus = scalar_series({1, 1});
  CHECK(norm_dinf(plus, s, table()).value == doctest::Approx(2.0).epsilon(1e-3));

  // 1 - 2^{-s}: sup over the torus of |1 - z| = 2
  DirichletTruncation minus = scalar_series({1, -1});
  CHECK(norm_dinf(minus, s, table()).value == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("dinf monotone in sampler effort") {
  auto D = random_scalar(200, 33);
  DinfSampler s;
  s.seed = 9;
  double prev = 0.0;
  for (std::uint32_t g : {16u, 32u, 64u, 128u, 256u}) {
    s.grid_points = g;
    const double v = norm_dinf(D, s, table()).value;
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  s.grid_points = 64;
  prev = 0.0;
  for (std::uint32_t ts : {1u, 2u, 4u, 8u}) {
    s.torus_samples = ts;
    const double v = norm_dinf(D, s, table()).value;
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
}

TEST_CASE("hp norm examples") {
  HpSampler s;
  s.seed = 3;

  // Parseval path is exact for p = 2 scalar
  CHECK(norm_hp(scalar_series({1, 1, 1}), 2.0, s, table()).value ==
        doctest::Approx(std::sqrt(3.0)));
  CHECK(norm_hp(scalar_series({1, 1, 1}), 2.0, s, table()).std_error == 0.0);

  DirichletTruncation zero(CoefficientSpaceSpec::scalar_space(), 4);
  CHECK(norm_hp(zero, 1.0, s, table()).value == 0.0);
  CHECK(norm_hp(zero, 4.0, s, table()).value == 0.0);

  // ||1 + 2^{-s}||_{H_4} = 6^{1/4}
  s.mc_samples = 20000;
  const McEstimate m = norm_hp(scalar_series({1, 1}), 4.0, s, table());
  CHECK(m.value == doctest::Approx(std::pow(6.0, 0.25)).epsilon(0.02));
  CHECK(m.std_error > 0.0);
  CHECK(m.samples == 20000);
  CHECK(std::abs(m.value - std::pow(6.0, 0.25)) < 4 * m.std_error + 1e-3);
}

TEST_CASE("hp Parseval consistency within 3 standard errors (scalar, MC path)") {
  HpSampler s;
  s.mc_samples = 8192;
  int misses = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto D = random_scalar(24, 500 + trial);
    s.seed = 900 + trial;
    double sumsq = 0.0;
    for (const auto& [n, a] : D.support()) sumsq += std::norm(a.get(0));
    const double exact = std::sqrt(sumsq);
    // run the MC machinery on an l2 model copy so the exact path is bypassed
    DirichletTruncation V(CoefficientSpaceSpec::lq(1, 1.0), D.n_max());
    for (const auto& [n, a] : D.support()) V.set(n, Coefficient::basis(0, a.get(0)));
    const McEstimate m = norm_hp(V, 2.0, s, table());
    if (std::abs(m.value - exact) > 3 * m.std_error + 1e-9) ++misses;
  }
  CHECK(misses <= 2); // 3-sigma misses are rare but legal
}

TEST_CASE("weak norm examples") {
  SamplerSet samplers = SamplerSet::seeded(4);
  const NormTag weak_ell1 = NormTag::make(NormTag::Family::ell1, 2.0, true);

  // sum e_n n^{-s} in the l1 model, d = 4: attained at the all-ones sign vector
  DirichletTruncation D(CoefficientSpaceSpec::lq(4, 1.0), 4);
  for (std::uint32_t n = 1; n <= 4; ++n) D.set(n, Coefficient::basis(n - 1, {1, 0}));
  CHECK(weak_norm(D, weak_ell1, 8, 11, samplers, table()).value == doctest::Approx(4.0));

  DirichletTruncation zero(CoefficientSpaceSpec::lq(4, 1.0), 4);
  CHECK(weak_norm(zero, weak_ell1, 8, 11, samplers, table()).value == 0.0);

  // d = 1 vector: the dual ball is the unit disc, weak norm = plain norm
  DirichletTruncation one(CoefficientSpaceSpec::lq(1, 2.0), 3);
  for (std::uint64_t n = 1; n <= 3; ++n)
    one.set(n, Coefficient::basis(0, rng::gaussian(21, n)));
  double plain = 0.0;
  for (const auto& [n, a] : one.support()) plain += std::abs(a.get(0));
  CHECK(weak_norm(one, weak_ell1, 8, 11, samplers, table()).value ==
        doctest::Approx(plain).epsilon(1e-9));

  CHECK_THROWS_AS(weak_norm(scalar_series({1}), weak_ell1, 4, 1, samplers, table()),
                  std::domain_error);
}

TEST_CASE("norm homogeneity and triangle inequality") {
  SamplerSet samplers = SamplerSet::seeded(6);
  samplers.hp.mc_samples = 4096;
  const NormTag tags[] = {
      NormTag::make(NormTag::Family::ell1), NormTag::make(NormTag::Family::ellinf),
      NormTag::make(NormTag::Family::csup), NormTag::make(NormTag::Family::dinf),
      NormTag::make(NormTag::Family::hp, 4.0)};
  for (const NormTag& tag : tags) {
    const double tol = tag.sampled() ? 0.02 : 1e-12;
    for (int trial = 0; trial < 3; ++trial) {
      auto A = random_scalar(32, 60 + trial);
      auto B = random_scalar(32, 80 + trial);
      const double na = norm(A, tag, samplers, table()).value;

      // homogeneity under scaling by 2.5
      DirichletTruncation A2(A.space(), A.n_max());
      for (const auto& [n, a] : A.support()) A2.set(n, a * cplx{2.5, 0});
      const double na2 = norm(A2, tag, samplers, table()).value;
      CHECK(std::abs(na2 - 2.5 * na) <= tol * std::max(1.0, 2.5 * na) * 3);

      // triangle inequality
      DirichletTruncation S(A.space(), A.n_max());
      for (const auto& [n, a] : A.support()) S.set(n, a);
      for (const auto& [n, b] : B.support()) {
        Coefficient c = S.at(n);
        c += b;
        S.set(n, c);
      }
      const double nb = norm(B, tag, samplers, table()).value;
      const double ns = norm(S, tag, samplers, table()).value;
      CHECK(ns <= na + nb + 3 * tol * std::max(1.0, na + nb));
    }
  }
}

TEST_CASE("coefficient bound against the dinf norm") {
  // left inequality of the admissibility sandwich with C1 = 1 for D_inf
  SamplerSet samplers = SamplerSet::seeded(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto D = random_scalar(24, 7000 + trial);
    const double nd = norm(D, NormTag::make(NormTag::Family::dinf), samplers, table()).value;
    double sup = 0.0;
    for (const auto& [n, a] : D.support()) sup = std::max(sup, std::abs(a.get(0)));
    CHECK(sup <= nd + 10 * 0.01 * std::max(1.0, nd));
  }
}

TEST_CASE("admissibility_check examples") {
  SamplerSet samplers = SamplerSet::seeded(10);
  samplers.hp.mc_samples = 2048;

  const auto r1 = admissibility_check(NormTag::make(NormTag::Family::ell1), 60, 1, samplers, table());
  CHECK(r1.ok);
  CHECK(r1.c1 >= 1.0 - 1e-9);
  CHECK(r1.c2 == doctest::Approx(1.0));

  const auto rinf = admissibility_check(NormTag::make(NormTag::Family::ellinf), 60, 2, samplers, table());
  CHECK(rinf.ok);
  CHECK(rinf.c1 == doctest::Approx(1.0));
  CHECK(rinf.c2 <= 1.0 + 1e-9);

  const auto rc = admissibility_check(NormTag::make(NormTag::Family::csup), 60, 3, samplers, table());
  CHECK(rc.ok);

  // the worst case c1 = 1/2 for csup: a = (1, -1) has csup 1, sup 1, sum 2
  auto D = scalar_series({1, -1});
  CHECK(norm_csup(D) == doctest::Approx(1.0));
  CHECK(norm_csup(D) / norm_ell1(D) == doctest::Approx(0.5));
}

TEST_CASE("norm_schedule matches pointwise norms for exact families") {
  SamplerSet samplers = SamplerSet::seeded(12);
  auto D = random_scalar(64, 444);
  const std::vector<std::uint64_t> schedule{2, 4, 8, 16, 32, 64};
  for (auto fam : {NormTag::Family::ell1, NormTag::Family::ellinf, NormTag::Family::csup}) {
    const NormTag tag = NormTag::make(fam);
    const auto sched = norm_schedule(D, tag, schedule, samplers, table());
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      DirichletTruncation P(D.space(), schedule[i]);
      for (const auto& [n, a] : D.support()) {
        if (n > schedule[i]) break;
        P.set(n, a);
      }
      CHECK(sched.values[i] == doctest::Approx(norm(P, tag, samplers, table()).value));
    }
  }
}
