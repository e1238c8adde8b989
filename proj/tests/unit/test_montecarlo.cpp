#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "kacsim/errors.hpp"
#include "kacsim/metrics.hpp"
#include "kacsim/montecarlo.hpp"

using namespace kacsim;

namespace {

// Brute-force oracle: mean of nu_t by direct summation of k * zeta(t, k).
double nu_mean_by_summation(double t, int N, int k_max) {
  const double q = -std::expm1(-(N - 1) * t);
  const double r = 1.0 / (N - 1);
  double zeta = std::exp(-t), acc = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    acc += k * zeta;
    zeta *= (r + k) / (k + 1.0) * q;
  }
  return acc;
}

}  // namespace

TEST_CASE("sample_nu at t = 0 is identically zero") {
  CounterRng rng(1, 0);
  for (int i = 0; i < 50; ++i) CHECK(sample_nu(rng, 0.0, 2) == 0);
  CHECK_THROWS_AS(sample_nu(rng, -1.0, 2), NumericError);
}

TEST_CASE("sample_nu matches the geometric law for N = 2") {
  const double t = 1.0;
  const int n = 200000;
  NuSampler nu(t, 2);
  std::vector<std::int64_t> counts(8, 0);
  for (int i = 0; i < n; ++i) {
    CounterRng rng(17, static_cast<std::uint64_t>(i));
    const std::int64_t k = nu(rng);
    if (k < 8) counts[k]++;
  }
  for (int k = 0; k < 8; ++k) {
    const double p = std::exp(-t) * std::pow(-std::expm1(-t), k);
    const double se = std::sqrt(n * p * (1.0 - p));
    CHECK(std::fabs(counts[k] - n * p) < 4.0 * se);
  }
}

TEST_CASE("sample_nu mean at N = 3, t = 2 within 4 standard errors") {
  const double t = 2.0;
  const int n = 100000;
  NuSampler nu(t, 3);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(23, static_cast<std::uint64_t>(i));
    const double k = static_cast<double>(nu(rng));
    sum += k;
    sum2 += k * k;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  const double expected = std::expm1(2.0 * t) / 2.0;
  CHECK(std::fabs(mean - expected) < 4.0 * se);
  // Closed form confirmed against brute-force summation of k zeta(t,k).
  CHECK(nu_mean_by_summation(t, 3, 4000) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(nu.mean() == doctest::Approx(expected));
}

TEST_CASE("sample_solution trivial cases") {
  const InitialLaw pm = InitialLaw::point_mass(7.0);
  CounterRng rng(2, 0);
  // t = 0: a single draw from F_0.
  CHECK(sample_solution(rng, KernelSpec::deterministic({0.6, 0.7}), pm, 0.0) == 7.0);
  // Conservative sum-weight kernel with point-mass data: exactly m0 forever.
  const KernelSpec halves = KernelSpec::deterministic({0.5, 0.5});
  for (double t : {0.5, 2.0, 5.0})
    CHECK(sample_solution(rng, halves, InitialLaw::point_mass(1.0), t) == 1.0);
  // Continuous conservative kernel: same conservation within rounding.
  const KernelSpec pair = KernelSpec::preset("uniform-pair");
  for (double t : {0.5, 3.0})
    CHECK(sample_solution(rng, pair, InitialLaw::point_mass(2.0), t) ==
          doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("expected-cost cap aborts instead of growing oversized trees") {
  CounterRng rng(3, 0);
  SolutionOptions opts;
  opts.expected_nodes_cap = 100.0;
  CHECK_THROWS_AS(
      sample_solution(rng, KernelSpec::deterministic({0.5, 0.5}), InitialLaw::rademacher(), 10.0,
                      opts),
      NumericError);
}

TEST_CASE("rescaled variance stays at sigma0^2 for the conservative kac2 kernel") {
  // Sum of beta^2 is exactly 1, so Var(V_t) = 1 at every t; mu(2) = 0 makes the
  // rescale a no-op.
  BatchOptions opts;
  opts.rescale_gamma = 2.0;
  opts.workers = 2;
  const SampleBatch batch = sample_batch(31, KernelSpec::preset("kac2"),
                                         InitialLaw::rademacher(), 2.0, 30000, opts);
  double m2 = 0.0;
  for (double v : batch.values) m2 += v * v;
  CHECK(m2 / static_cast<double>(batch.values.size()) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("batch determinism: identical output for any worker count") {
  const KernelSpec spec = KernelSpec::deterministic({0.6, 0.7});
  const InitialLaw law = InitialLaw::rademacher();
  BatchOptions w1, w8;
  w1.workers = 1;
  w8.workers = 8;
  const SampleBatch a = sample_batch(91, spec, law, 1.5, 5000, w1);
  const SampleBatch b = sample_batch(91, spec, law, 1.5, 5000, w8);
  CHECK(a.values == b.values);  // bit-identical, not merely as sorted sets
}

TEST_CASE("batch of size 1 reproduces sample_solution on stream 0") {
  const KernelSpec spec = KernelSpec::deterministic({0.6, 0.7});
  const InitialLaw law = InitialLaw::gaussian(1.0);
  const SampleBatch batch = sample_batch(55, spec, law, 1.0, 1, {});
  CounterRng rng(55, 0);
  CHECK(batch.values[0] == sample_solution(rng, spec, law, 1.0));
}

TEST_CASE("disjoint seeds draw the same law: KS below 0.01 at 1e5") {
  const KernelSpec spec = KernelSpec::deterministic({0.6, 0.7});
  const InitialLaw law = InitialLaw::rademacher();
  const SampleBatch a = sample_batch(1001, spec, law, 1.0, 100000, {});
  const SampleBatch b = sample_batch(2002, spec, law, 1.0, 100000, {});
  CHECK(ks_distance_two_sample(a, b) < 0.01);
}

TEST_CASE("empirical CF at t = 0 equals the CF of F_0 within 5/sqrt(n)") {
  const std::int64_t n = 100000;
  const double tol = 5.0 / std::sqrt(static_cast<double>(n));
  const InitialLaw law = InitialLaw::rademacher();
  const SampleBatch batch =
      sample_batch(71, KernelSpec::deterministic({0.6, 0.7}), law, 0.0, n, {});
  const std::vector<double> grid = {0.25, 1.0, 4.0};
  const auto cf = empirical_cf(batch, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(cf[i] - *analytic_cf(law, grid[i])) < tol);
}

TEST_CASE("sample_limit cases") {
  MixingLaw degenerate;
  degenerate.population.assign(10000, 1.0);
  degenerate.gamma = 2.0;

  // Degenerate mixing + H2: standard normal draws.
  const HGammaProfile h2 = classify(InitialLaw::gaussian(1.0), 2.0);
  const SampleBatch normals = sample_limit_batch(5, degenerate, h2, 200000, 2);
  double m2 = 0.0;
  for (double v : normals.values) m2 += v * v;
  CHECK(m2 / normals.values.size() == doctest::Approx(1.0).epsilon(0.01));

  // H1a with m0 = 0: identically zero.
  MixingLaw any;
  any.population = {0.5, 1.5, 1.0};
  any.gamma = 1.0;
  const HGammaProfile h1a0 = classify(InitialLaw::point_mass(0.0), 1.0);
  CounterRng rng(6, 0);
  for (int i = 0; i < 20; ++i) CHECK(sample_limit(rng, any, h1a0) == 0.0);

  MixingLaw empty;
  empty.gamma = 1.0;
  CHECK_THROWS_AS(sample_limit(rng, empty, h1a0), StateError);
}

TEST_CASE("limit_cf through a degenerate population recovers the stable CF") {
  MixingLaw degenerate;
  degenerate.population.assign(100, 1.0);
  degenerate.gamma = 2.0;
  const HGammaProfile h2 = classify(InitialLaw::gaussian(1.0), 2.0);
  for (double xi : {0.5, 1.0, 2.0}) {
    const std::complex<double> v = limit_cf(degenerate, h2, xi);
    CHECK(v.real() == doctest::Approx(std::exp(-0.5 * xi * xi)).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(0.0));
  }
}

TEST_CASE("gamma clock check: N = 2 at t = 8 is within 0.02 of Exp(1)") {
  const KernelSpec pair = KernelSpec::preset("uniform-pair");
  const ClockCheck check = gamma_clock_check(41, 8.0, 2, 100000, &pair, 1.0);
  CHECK(check.ks < 0.02);
  CHECK_FALSE(check.scale_warning);
  CHECK(check.c_gamma == doctest::Approx(1.0).epsilon(1e-12));  // S(1) = 0
}

TEST_CASE("gamma clock check warns when t is too small for the limit regime") {
  const ClockCheck check = gamma_clock_check(42, 1.0, 2, 1000);
  CHECK(check.scale_warning);  // e^{-t} = 0.37 >= 0.05
}
