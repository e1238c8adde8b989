#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "kacsim/errors.hpp"
#include "kacsim/initial_data.hpp"
#include "kacsim/rng.hpp"

using namespace kacsim;

namespace {

std::complex<double> empirical_cf_of(const std::vector<double>& xs, double xi) {
  double re = 0.0, im = 0.0;
  for (double x : xs) {
    re += std::cos(xi * x);
    im += std::sin(xi * x);
  }
  return {re / xs.size(), im / xs.size()};
}

std::vector<double> draw_initial(const InitialLaw& law, int n, std::uint64_t seed) {
  std::vector<double> xs(n);
  CounterRng rng(seed, 0);
  for (double& x : xs) x = sample_initial(rng, law);
  return xs;
}

std::vector<double> draw_stable(const HGammaProfile& profile, int n, std::uint64_t seed) {
  std::vector<double> xs(n);
  CounterRng rng(seed, 1);
  for (double& x : xs) x = sample_stable(rng, profile);
  return xs;
}

}  // namespace

TEST_CASE("classification of the shipped families") {
  const HGammaProfile g2 = classify(InitialLaw::gaussian(1.0), 2.0);
  CHECK(g2.h_case == HGammaCase::H2);
  CHECK(g2.sigma0_sq == doctest::Approx(1.0));

  const HGammaProfile pm = classify(InitialLaw::point_mass(3.0), 1.0);
  CHECK(pm.h_case == HGammaCase::H1a);
  CHECK(pm.m0 == doctest::Approx(3.0));

  const HGammaProfile sp = classify(InitialLaw::symmetric_pareto(1.0, 0.5), 1.0);
  CHECK(sp.h_case == HGammaCase::H1b);
  CHECK(sp.c0_plus == doctest::Approx(0.5));

  CHECK_THROWS_AS(classify(InitialLaw::gaussian(1.0), 1.5), HypothesisError);
  CHECK_THROWS_AS(classify(InitialLaw::rademacher(), 0.7), HypothesisError);

  // Rademacher and Gaussian are integrable with mean zero: (H_1)(a) holds.
  CHECK(classify(InitialLaw::rademacher(), 1.0).h_case == HGammaCase::H1a);
  CHECK(classify(InitialLaw::rademacher(), 2.0).h_case == HGammaCase::H2);
  CHECK(classify(InitialLaw::gaussian(2.0), 1.0).m0 == doctest::Approx(0.0));

  // Skewed tails at gamma = 1 satisfy neither (H_1)(a) nor the symmetric (b).
  CHECK_THROWS_AS(classify(InitialLaw::skew_pareto(0.8, 1.0, 0.25), 1.0), HypothesisError);
}

TEST_CASE("symmetric pareto normalization pins x0") {
  const InitialLaw law = InitialLaw::symmetric_pareto(1.0, 0.5);
  CHECK(law.x0 == doctest::Approx(1.0));  // (2 c0)^{1/gamma}
  const InitialLaw law2 = InitialLaw::symmetric_pareto(0.5, 2.0);
  CHECK(law2.x0 == doctest::Approx(16.0));  // (2*2)^2
}

TEST_CASE("stable_cf closed-form values") {
  const HGammaProfile h2 = classify(InitialLaw::gaussian(1.0), 2.0);
  CHECK(stable_cf(h2, 1.0).real() == doctest::Approx(std::exp(-0.5)));
  CHECK(stable_cf(h2, 1.0).imag() == doctest::Approx(0.0));

  const HGammaProfile h1a = classify(InitialLaw::point_mass(3.0), 1.0);
  CHECK(stable_cf(h1a, 1.0).real() == doctest::Approx(std::cos(3.0)));
  CHECK(stable_cf(h1a, 1.0).imag() == doctest::Approx(std::sin(3.0)));

  // gamma = 1/2, c0+ = c0- = 1/2: k0 = sqrt(pi/2), eta0 = 0.
  const HGammaProfile half = classify(InitialLaw::symmetric_pareto(0.5, 0.5), 0.5);
  CHECK(half.k0 == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-12));
  CHECK(half.eta0 == doctest::Approx(0.0));
}

TEST_CASE("stable_cf is a hermitian characteristic function bounded by 1") {
  for (const HGammaProfile& p :
       {classify(InitialLaw::gaussian(1.3), 2.0), classify(InitialLaw::point_mass(2.0), 1.0),
        classify(InitialLaw::symmetric_pareto(1.0, 0.5), 1.0),
        classify(InitialLaw::skew_pareto(1.5, 1.0, 0.25), 1.5),
        classify(InitialLaw::skew_pareto(0.7, 0.3, 0.9), 0.7)}) {
    CHECK(stable_cf(p, 0.0) == std::complex<double>(1.0, 0.0));
    for (double xi : {0.25, 1.0, 4.0, -2.5}) {
      const std::complex<double> v = stable_cf(p, xi);
      CHECK(std::abs(v) <= 1.0 + 1e-12);
      const std::complex<double> conj = stable_cf(p, -xi);
      CHECK(conj.real() == doctest::Approx(v.real()).epsilon(1e-12));
      CHECK(conj.imag() == doctest::Approx(-v.imag()).epsilon(1e-12));
    }
  }
}

TEST_CASE("sample_initial basics") {
  CounterRng rng(5, 0);
  for (int i = 0; i < 10; ++i)
    CHECK(sample_initial(rng, InitialLaw::point_mass(2.5)) == 2.5);

  const int n = 1000000;
  const std::vector<double> rad = draw_initial(InitialLaw::rademacher(), n, 21);
  double mean = 0.0;
  for (double x : rad) mean += x;
  mean /= n;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("symmetric pareto tail property at x = 100") {
  const int n = 1000000;
  const std::vector<double> xs = draw_initial(InitialLaw::symmetric_pareto(1.0, 0.5), n, 31);
  std::int64_t over = 0;
  for (double x : xs)
    if (x > 100.0) ++over;
  const double estimate = 100.0 * static_cast<double>(over) / n;  // x (1 - F(x))
  const double p = 0.5 / 100.0;
  const double se = 100.0 * std::sqrt(p * (1.0 - p) / n);
  CHECK(std::fabs(estimate - 0.5) < 3.0 * se);
}

TEST_CASE("sample_stable: degenerate and gaussian cases") {
  const HGammaProfile h1a = classify(InitialLaw::point_mass(3.0), 1.0);
  CounterRng rng(6, 0);
  for (int i = 0; i < 10; ++i) CHECK(sample_stable(rng, h1a) == 3.0);

  const int n = 1000000;
  const HGammaProfile h2 = classify(InitialLaw::gaussian(1.0), 2.0);
  const std::vector<double> xs = draw_stable(h2, n, 41);
  double m2 = 0.0;
  for (double x : xs) m2 += x * x;
  CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("sample_stable H1b matches Cauchy(0, pi/2) in KS") {
  const HGammaProfile h1b = classify(InitialLaw::symmetric_pareto(1.0, 0.5), 1.0);
  const int n = 1000000;
  std::vector<double> xs = draw_stable(h1b, n, 51);
  std::sort(xs.begin(), xs.end());
  const double scale = M_PI * 0.5;
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double F = 0.5 + std::atan(xs[i] / scale) / M_PI;
    ks = std::max(ks, std::max(F - static_cast<double>(i) / n,
                               static_cast<double>(i + 1) / n - F));
  }
  CHECK(ks < 0.005);
}

TEST_CASE("empirical CF of initial samplers matches the analytic CF within 5/sqrt(n)") {
  const int n = 1000000;
  const double tol = 5.0 / std::sqrt(static_cast<double>(n));
  int seed = 61;
  for (const InitialLaw& law :
       {InitialLaw::gaussian(1.0), InitialLaw::point_mass(1.5), InitialLaw::rademacher()}) {
    const std::vector<double> xs = draw_initial(law, n, seed++);
    for (double xi : {0.25, 1.0, 4.0}) {
      const std::complex<double> emp = empirical_cf_of(xs, xi);
      const std::complex<double> ana = *analytic_cf(law, xi);
      CHECK(std::abs(emp - ana) < tol);
    }
  }
}

TEST_CASE("empirical CF of sample_stable reproduces stable_cf within 5/sqrt(n)") {
  const int n = 1000000;
  const double tol = 5.0 / std::sqrt(static_cast<double>(n));
  int seed = 71;
  for (const HGammaProfile& p :
       {classify(InitialLaw::gaussian(1.0), 2.0),
        classify(InitialLaw::symmetric_pareto(1.0, 0.5), 1.0),
        classify(InitialLaw::symmetric_pareto(0.5, 0.5), 0.5),
        classify(InitialLaw::skew_pareto(1.5, 1.0, 0.25), 1.5),
        classify(InitialLaw::skew_pareto(0.7, 0.3, 0.9), 0.7),
        classify(InitialLaw::skew_pareto(1.9, 1.0, 1.0), 1.9)}) {
    const std::vector<double> xs = draw_stable(p, n, seed++);
    for (double xi : {0.25, 1.0, 4.0}) {
      const std::complex<double> emp = empirical_cf_of(xs, xi);
      const std::complex<double> ana = stable_cf(p, xi);
      CHECK(std::abs(emp - ana) < tol);
    }
  }
}

TEST_CASE("skew pareto centering keeps the sample mean near zero") {
  const InitialLaw law = InitialLaw::skew_pareto(1.9, 1.0, 0.25);
  const int n = 1000000;
  const std::vector<double> xs = draw_initial(law, n, 81);
  double mean = 0.0;
  for (double x : xs) mean += x;
  CHECK(std::fabs(mean / n) < 0.05);
  // Undoing the shift restores the pure right tail: P(X + shift > x) x^gamma = c0+.
  std::int64_t over = 0;
  for (double x : xs)
    if (x + law.shift > 20.0) ++over;
  const double est = std::pow(20.0, 1.9) * static_cast<double>(over) / n;
  const double p = std::pow(20.0, -1.9);
  const double se = std::pow(20.0, 1.9) * std::sqrt(p / n);
  CHECK(std::fabs(est - 1.0) < 4.0 * se);
}
