#include <doctest.h>

#include <cmath>

#include "kacsim/numeric.hpp"

using namespace kacsim;

TEST_CASE("pow0 convention") {
  CHECK(pow0(0.0, 0.0) == 0.0);
  CHECK(pow0(0.0, 2.0) == 0.0);
  CHECK(pow0(0.5, 0.0) == 1.0);
  CHECK(pow0(2.0, 3.0) == doctest::Approx(8.0));
}

TEST_CASE("gamma_cdf against closed forms") {
  // shape 1: Exp(1)
  for (double x : {0.1, 0.5, 1.0, 3.0, 8.0})
    CHECK(gamma_cdf(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  // shape 1/2: erf(sqrt(x))
  for (double x : {0.1, 0.5, 1.0, 3.0, 8.0})
    CHECK(gamma_cdf(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
  CHECK(gamma_cdf(2.0, 0.0) == 0.0);
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const QuadratureRule& rule = gauss_legendre_01(64);
  REQUIRE(rule.nodes.size() == 64);
  double w_total = 0.0;
  for (double w : rule.weights) w_total += w;
  CHECK(w_total == doctest::Approx(1.0).epsilon(1e-14));
  // integral of x^9 over [0,1] = 1/10
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * std::pow(rule.nodes[i], 9);
  CHECK(acc == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("rational arithmetic reduces exactly") {
  Rational half(1, 2), third(1, 3);
  const Rational sum = half + third;
  CHECK(sum.numerator() == 5);
  CHECK(sum.denominator() == 6);
  const Rational prod = half * third;
  CHECK(prod.numerator() == 1);
  CHECK(prod.denominator() == 6);
  CHECK((Rational(2, 4) == Rational(1, 2)));
}

TEST_CASE("composition enumeration counts stars-and-bars") {
  int count = 0;
  for_each_composition(3, 2, [&](const std::vector<std::int64_t>& c) {
    CHECK(c[0] + c[1] == 3);
    ++count;
  });
  CHECK(count == 4);
  count = 0;
  for_each_composition(4, 3, [&](const std::vector<std::int64_t>&) { ++count; });
  CHECK(count == 15);  // C(4+2, 2)
}
