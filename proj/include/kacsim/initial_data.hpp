#ifndef KACSIM_INITIAL_DATA_HPP
#define KACSIM_INITIAL_DATA_HPP

#include <complex>
#include <optional>
#include <string>

#include "kacsim/rng.hpp"

namespace kacsim {

// ---------------------------------------------------------------------------
// Initial laws F_0 with known stable-attraction classification.
// ---------------------------------------------------------------------------

enum class LawFamily { Gaussian, PointMass, Rademacher, SymmetricPareto, SkewPareto };

struct InitialLaw {
  LawFamily family = LawFamily::Rademacher;
  double sigma0 = 1.0;    // Gaussian
  double m0 = 0.0;        // PointMass
  double gamma = 1.0;     // Pareto families: tail exponent in (0,2)
  double c0_plus = 0.0;   // right tail constant
  double c0_minus = 0.0;  // left tail constant
  double x0 = 0.0;        // SymmetricPareto cutoff (2 c0)^{1/gamma}
  double shift = 0.0;     // SkewPareto centering shift (gamma > 1)
  std::string label;

  static InitialLaw gaussian(double sigma0);
  static InitialLaw point_mass(double m0);
  static InitialLaw rademacher();
  // Pure-tail symmetric law: F(x) = 1 - c0 x^{-gamma} for x >= x0, no mass in
  // (-x0, x0); x0 = (2 c0)^{1/gamma} pins total mass 1.
  static InitialLaw symmetric_pareto(double gamma, double c0);
  // Two-sided pure-tail law with constants (c0+, c0-), centered when gamma > 1.
  static InitialLaw skew_pareto(double gamma, double c0_plus, double c0_minus);
};

// One i.i.d. draw from F_0.
double sample_initial(CounterRng& rng, const InitialLaw& law);

// Analytic characteristic function of F_0, when elementary (Gaussian,
// PointMass, Rademacher); the Wild series and CF cross-checks require it.
std::optional<std::complex<double>> analytic_cf(const InitialLaw& law, double xi);

// ---------------------------------------------------------------------------
// (H_gamma) classification and the attracting stable laws
// ---------------------------------------------------------------------------

enum class HGammaCase {
  H1a,      // gamma = 1, finite mean m0: limit CF exp(i m0 xi)
  H1b,      // gamma = 1, symmetric Cauchy tails: exp(-pi c0+ |xi|)
  H2,       // gamma = 2, finite variance: exp(-sigma0^2 xi^2 / 2)
  Hgeneral  // gamma in (0,1) u (1,2): skewed stable with (k0, eta0)
};

struct HGammaProfile {
  double gamma = 0.0;
  HGammaCase h_case = HGammaCase::H1a;
  double m0 = 0.0;
  double c0_plus = 0.0;
  double c0_minus = 0.0;
  double sigma0_sq = 0.0;
  double k0 = 0.0;    // (c0+ + c0-) pi / (2 Gamma(gamma) sin(pi gamma / 2))
  double eta0 = 0.0;  // (c0+ - c0-) / (c0+ + c0-)
};

// Classifies the law at the given gamma; throws HypothesisError naming the
// failed condition when the law does not satisfy (H_gamma) there.
HGammaProfile classify(const InitialLaw& law, double gamma);

// Characteristic function g_gamma of the attracting (centered) stable law.
std::complex<double> stable_cf(const HGammaProfile& profile, double xi);

// Draw with characteristic function g_gamma: normal for H2, Cauchy for H1b,
// the point m0 for H1a, Chambers-Mallows-Stuck for the general skewed case.
double sample_stable(CounterRng& rng, const HGammaProfile& profile);

}  // namespace kacsim

#endif
