#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kacsim/errors.hpp"
#include "kacsim/kernel.hpp"
#include "kacsim/numeric.hpp"

using namespace kacsim;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Independent quadrature oracle for E[U^a] on (0,1): composite Simpson on a
// fine grid (the implementation path uses the closed form 1/(a+1)).
double simpson_uniform_moment(double a, int n = 20000) {
  auto f = [a](double x) { return std::pow(x, a); };
  double acc = 0.0;
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const double x0 = i * h, x1 = x0 + h;
    acc += (f(x0 + 1e-12) + 4.0 * f(0.5 * (x0 + x1)) + f(x1)) * h / 6.0;
  }
  return acc;
}

}  // namespace

TEST_CASE("validate_kernel on the three deterministic examples") {
  const double r = 1.0 / std::sqrt(2.0);
  const ValidationReport ok = validate_kernel(KernelSpec::deterministic({r, r}));
  CHECK(ok.passed);
  CHECK(ok.conditions[0].passed);
  CHECK(ok.conditions[1].passed);
  CHECK(ok.conditions[2].passed);

  const ValidationReport first = validate_kernel(KernelSpec::deterministic({1.0, 0.0}));
  CHECK_FALSE(first.passed);
  CHECK_FALSE(first.conditions[0].passed);  // sum of indicators is 1 surely

  const ValidationReport third = validate_kernel(KernelSpec::deterministic({1.0, 1.0}));
  CHECK_FALSE(third.passed);
  CHECK(third.conditions[0].passed);
  CHECK_FALSE(third.conditions[2].passed);  // all components in {0,1}
}

TEST_CASE("malformed specs raise config errors, not hypothesis failures") {
  CHECK_THROWS_AS(KernelSpec::deterministic({0.5, -0.1}), ConfigError);
  CHECK_THROWS_AS(KernelSpec::deterministic(std::vector<double>(65, 0.5)), ConfigError);
  CHECK_THROWS_AS(KernelSpec::discrete_mixture({{0.5, {1.0, 0.5}}, {0.4, {0.3, 0.3}}}),
                  ConfigError);  // probabilities sum to 0.9
  CHECK_THROWS_AS(KernelSpec::independent({{MarginalKind::ComplementUniformPower, 1.0, 0.0, 0},
                                           {MarginalKind::Uniform01Power, 1.0, 0.0, -1}}),
                  ConfigError);  // partner must be an earlier uniform component
}

TEST_CASE("validate_kernel evaluates mixtures exactly") {
  // Half the mass puts a single positive component, half none at all:
  // the indicator sum is in {0,1} surely and its mean is 1/2.
  const ValidationReport rep = validate_kernel(
      KernelSpec::discrete_mixture({{0.5, {1.0, 0.0}}, {0.5, {0.0, 0.0}}}));
  CHECK_FALSE(rep.passed);
  CHECK(rep.conditions[0].value == doctest::Approx(1.0));
  CHECK(rep.conditions[1].value == doctest::Approx(0.5));
  CHECK(rep.conditions[2].value == doctest::Approx(1.0));
  // Mixing in a strictly positive non-binary atom flips all three.
  const ValidationReport ok = validate_kernel(KernelSpec::discrete_mixture(
      {{0.5, {1.0, 0.0}}, {0.5, {0.5, 0.5}}}));
  CHECK(ok.passed);
  CHECK(ok.conditions[0].value == doctest::Approx(0.5));
  CHECK(ok.conditions[1].value == doctest::Approx(1.5));
  CHECK(ok.conditions[2].value == doctest::Approx(0.5));
}

TEST_CASE("validation closed form for independent components") {
  const ValidationReport rep = validate_kernel(KernelSpec::preset("kac2"));
  CHECK(rep.passed);
  CHECK(rep.method == "closed-form");
  CHECK(rep.conditions[1].value == doctest::Approx(2.0));

  // One positive component only: indicator sum is 1 surely.
  const ValidationReport bad = validate_kernel(KernelSpec::independent(
      {{MarginalKind::Uniform01Power, 1.0, 0.0, -1}, {MarginalKind::Constant, 0.0, 0.0, -1}}));
  CHECK_FALSE(bad.passed);
  CHECK_FALSE(bad.conditions[0].passed);
}

TEST_CASE("spectral closed forms: kac2 has S(s) = (2-s)/(2+s)") {
  const KernelSpec kac2 = KernelSpec::preset("kac2");
  for (double s : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 8.0}) {
    CHECK(spectral_S(kac2, s) == doctest::Approx((2.0 - s) / (2.0 + s)).epsilon(1e-12));
  }
  CHECK(spectral_S(kac2, 2.0) == doctest::Approx(0.0));
  CHECK(spectral_S(kac2, 4.0) == doctest::Approx(-1.0 / 3.0));
  // Independent confirmation by Simpson quadrature of E[U^{s/2}] + E[(1-U)^{s/2}] - 1.
  for (double s : {1.0, 2.0, 4.0}) {
    const double oracle = 2.0 * simpson_uniform_moment(s / 2.0) - 1.0;
    CHECK(spectral_S(kac2, s) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("spectral trivia") {
  // Strictly positive components: S(0) = N - 1.
  CHECK(spectral_S(KernelSpec::deterministic({0.3, 0.4, 0.5}), 0.0) == doctest::Approx(2.0));
  CHECK(spectral_S(KernelSpec::preset("kac2"), 0.0) == doctest::Approx(1.0));
  // Deterministic (0.6, 0.7): S(1) = 0.3 = mu(1).
  const KernelSpec det = KernelSpec::deterministic({0.6, 0.7});
  CHECK(spectral_S(det, 1.0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(spectral_mu(det, 1.0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(spectral_mu(det, 2.0) == doctest::Approx(-0.075).epsilon(1e-12));
  CHECK_THROWS_AS(spectral_S(det, -1.0), NumericError);
  // 0^0 = 0: a zero atom contributes nothing at s = 0.
  CHECK(spectral_S(KernelSpec::deterministic({1.0, 0.0}), 0.0) == doctest::Approx(0.0));
}

TEST_CASE("Beta marginal quadrature agrees with the log-gamma closed form") {
  // E[A^s] = B(a+s, b)/B(a, b); polynomial integrands are exact under GL64.
  auto beta_moment = [](double a, double b, double s) {
    return std::exp(std::lgamma(a + s) + std::lgamma(a + b) - std::lgamma(a) -
                    std::lgamma(a + b + s));
  };
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
    const KernelSpec spec = KernelSpec::independent(
        {{MarginalKind::Beta, a, b, -1}, {MarginalKind::Beta, a, b, -1}});
    for (double s : {1.0, 2.0, 3.0, 4.0}) {
      const double expected = 2.0 * beta_moment(a, b, s) - 1.0;
      CHECK(spectral_S(spec, s) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("monte carlo route agrees with exact summation within 4 standard errors") {
  const KernelSpec mix = KernelSpec::discrete_mixture(
      {{0.25, {0.9, 0.1}}, {0.5, {0.5, 0.5}}, {0.25, {0.2, 1.1}}}, "mix3");
  for (double s : {0.5, 1.0, 2.0, 3.5}) {
    const double exact = spectral_S(mix, s);
    const McEstimate mc = spectral_mc(mix, s, 200000, 99);
    CHECK(std::fabs(mc.value - exact) < 4.0 * std::max(mc.std_error, 1e-12));
  }
  // Same cross-check through a continuous kernel.
  const KernelSpec kac2 = KernelSpec::preset("kac2");
  for (double s : {1.0, 3.0}) {
    const McEstimate mc = spectral_mc(kac2, s, 200000, 7);
    CHECK(std::fabs(mc.value - spectral_S(kac2, s)) < 4.0 * mc.std_error);
  }
}

TEST_CASE("convexity of S on sampled grids") {
  for (const KernelSpec& spec :
       {KernelSpec::preset("kac2"), KernelSpec::deterministic({0.6, 0.7}),
        KernelSpec::deterministic({1.2, 0.5}),
        KernelSpec::discrete_mixture({{0.5, {1.0, 0.2}}, {0.5, {0.1, 0.8}}})}) {
    for (int i = 0; i < 40; ++i) {
      const double s1 = 0.1 + 0.2 * i;
      const double s2 = s1 + 1.6;
      const double lhs = spectral_S(spec, 0.5 * (s1 + s2));
      const double rhs = 0.5 * (spectral_S(spec, s1) + spectral_S(spec, s2));
      CHECK(lhs <= rhs + 1e-9);
    }
  }
}

TEST_CASE("conservative kernels have S(gamma) = 0 exactly") {
  CHECK(KernelSpec::deterministic({0.5, 0.5}).is_conservative(1.0));
  CHECK(spectral_S(KernelSpec::deterministic({0.5, 0.5}), 1.0) == 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(KernelSpec::deterministic({r, r}).is_conservative(2.0));
  CHECK(KernelSpec::preset("kac2").is_conservative(2.0));
  CHECK(spectral_S(KernelSpec::preset("kac2"), 2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(KernelSpec::preset("uniform-pair").is_conservative(1.0));
  CHECK_FALSE(KernelSpec::deterministic({0.6, 0.7}).is_conservative(1.0));
}

TEST_CASE("conjugate exponent: infinite cases") {
  // kac2 at gamma = 2: mu(q) = (2-q)/(q(2+q)) hits 0 only at q = 2.
  const ConjugateResult kac2 = conjugate_exponent_full(KernelSpec::preset("kac2"), 2.0);
  CHECK(kac2.q_star == kInf);
  // (0.6, 0.7) at gamma = 1: the level 0.3 is crossed once.
  CHECK(conjugate_exponent(KernelSpec::deterministic({0.6, 0.7}), 1.0) == kInf);
  // Constant S: mu = S/q is strictly monotone, flagged as such.
  const ConjugateResult ones = conjugate_exponent_full(KernelSpec::deterministic({1.0, 1.0}), 1.0);
  CHECK(ones.q_star == kInf);
  CHECK(ones.monotone);
}

TEST_CASE("conjugate exponent: (1.2, 0.5) at gamma = 1 sits in (12, 13)") {
  const KernelSpec spec = KernelSpec::deterministic({1.2, 0.5});
  // Bracket endpoints quoted from the spectral profile itself.
  CHECK(spectral_mu(spec, 12.0) == doctest::Approx(0.6597).epsilon(1e-3));
  CHECK(spectral_mu(spec, 13.0) == doctest::Approx(0.7461).epsilon(1e-3));
  const double q = conjugate_exponent(spec, 1.0);
  CHECK(q == doctest::Approx(12.483979).epsilon(1e-5));
  // Bisection oracle: mu(q*) = mu(1) = 0.7.
  CHECK(spectral_mu(spec, q) == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("conjugate exponent is invariant under atom reordering") {
  const double q1 = conjugate_exponent(KernelSpec::deterministic({1.2, 0.5}), 1.0);
  const double q2 = conjugate_exponent(KernelSpec::deterministic({0.5, 1.2}), 1.0);
  CHECK(q1 == doctest::Approx(q2).epsilon(1e-9));
  const KernelSpec mix_a = KernelSpec::discrete_mixture({{0.3, {1.3, 0.2}}, {0.7, {0.4, 0.9}}});
  const KernelSpec mix_b = KernelSpec::discrete_mixture({{0.7, {0.9, 0.4}}, {0.3, {0.2, 1.3}}});
  const double qa = conjugate_exponent(mix_a, 1.0);
  const double qb = conjugate_exponent(mix_b, 1.0);
  if (std::isfinite(qa) || std::isfinite(qb)) CHECK(qa == doctest::Approx(qb).epsilon(1e-9));
}

TEST_CASE("existence regime scan") {
  // (0.6, 0.7): mu decreasing past gamma = 1, so a delta > gamma qualifies.
  CHECK(exists_delta_above(KernelSpec::deterministic({0.6, 0.7}), 1.0));
  // (2, 0.01) at gamma = 1: mu rises above mu(1) for delta > 1.
  CHECK_FALSE(exists_delta_above(KernelSpec::deterministic({2.0, 0.01}), 1.0));
}

TEST_CASE("weight moments: discrete and coupled-uniform kernels") {
  const WeightMoments det = weight_moments(KernelSpec::deterministic({0.6, 0.7}), 1.0);
  CHECK(det.s1 == doctest::Approx(1.3));
  CHECK(det.s2 == doctest::Approx(0.85));
  CHECK(det.cross == doctest::Approx(0.84));
  // kac2 at gamma = 2: cross moment 2 E[U(1-U)] = 1/3, s2 = E[U^2 + (1-U)^2] = 2/3.
  const WeightMoments kac2 = weight_moments(KernelSpec::preset("kac2"), 2.0);
  CHECK(kac2.s1 == doctest::Approx(1.0));
  CHECK(kac2.s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(kac2.cross == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}
