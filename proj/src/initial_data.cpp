#include "kacsim/initial_data.hpp"

#include <cmath>

#include "kacsim/errors.hpp"

namespace kacsim {

namespace {
constexpr double kGammaTol = 1e-12;
}

InitialLaw InitialLaw::gaussian(double sigma0) {
  if (!(sigma0 > 0.0)) throw ConfigError("gaussian: sigma0 must be positive");
  InitialLaw law;
  law.family = LawFamily::Gaussian;
  law.sigma0 = sigma0;
  law.label = "gaussian";
  return law;
}

InitialLaw InitialLaw::point_mass(double m0) {
  InitialLaw law;
  law.family = LawFamily::PointMass;
  law.m0 = m0;
  law.label = "point-mass";
  return law;
}

InitialLaw InitialLaw::rademacher() {
  InitialLaw law;
  law.family = LawFamily::Rademacher;
  law.label = "rademacher";
  return law;
}

InitialLaw InitialLaw::symmetric_pareto(double gamma, double c0) {
  if (!(gamma > 0.0) || !(gamma < 2.0))
    throw ConfigError("symmetric_pareto: gamma must lie in (0,2)");
  if (!(c0 > 0.0)) throw ConfigError("symmetric_pareto: c0 must be positive");
  InitialLaw law;
  law.family = LawFamily::SymmetricPareto;
  law.gamma = gamma;
  law.c0_plus = c0;
  law.c0_minus = c0;
  law.x0 = std::pow(2.0 * c0, 1.0 / gamma);
  law.label = "symmetric-pareto";
  return law;
}

InitialLaw InitialLaw::skew_pareto(double gamma, double c0_plus, double c0_minus) {
  if (!(gamma > 0.0) || !(gamma < 2.0) || std::fabs(gamma - 1.0) < kGammaTol)
    throw ConfigError("skew_pareto: gamma must lie in (0,1) u (1,2)");
  if (!(c0_plus >= 0.0) || !(c0_minus >= 0.0) || !(c0_plus + c0_minus > 0.0))
    throw ConfigError("skew_pareto: need c0+ + c0- > 0 with nonnegative constants");
  InitialLaw law;
  law.family = LawFamily::SkewPareto;
  law.gamma = gamma;
  law.c0_plus = c0_plus;
  law.c0_minus = c0_minus;
  // Branch threshold b makes both tails pure: P(X > x) = c0+ x^{-gamma} for
  // x >= b with branch probability p+ = c0+/(c0+ + c0-).
  law.x0 = std::pow(c0_plus + c0_minus, 1.0 / gamma);
  if (gamma > 1.0) {
    const double s = c0_plus + c0_minus;
    const double p_diff = (c0_plus - c0_minus) / s;
    law.shift = law.x0 * gamma / (gamma - 1.0) * p_diff;  // makes the mean 0
  }
  law.label = "skew-pareto";
  return law;
}

double sample_initial(CounterRng& rng, const InitialLaw& law) {
  switch (law.family) {
    case LawFamily::Gaussian:
      return law.sigma0 * rng.normal();
    case LawFamily::PointMass:
      return law.m0;
    case LawFamily::Rademacher:
      return rng.u01() < 0.5 ? -1.0 : 1.0;
    case LawFamily::SymmetricPareto: {
      // Inverse CDF: F(x) = c0 |x|^{-gamma} below -x0, 1 - c0 x^{-gamma} above x0.
      const double u = rng.u01_open();
      if (u < 0.5) return -std::pow(law.c0_plus / u, 1.0 / law.gamma);
      return std::pow(law.c0_plus / (1.0 - u), 1.0 / law.gamma);
    }
    case LawFamily::SkewPareto: {
      const double s = law.c0_plus + law.c0_minus;
      const double u = rng.u01_open();
      const double tail = std::pow(rng.u01_open(), -1.0 / law.gamma);  // b * U^{-1/gamma}
      const double x = (u < law.c0_plus / s) ? law.x0 * tail : -law.x0 * tail;
      return x - law.shift;
    }
  }
  return 0.0;
}

std::optional<std::complex<double>> analytic_cf(const InitialLaw& law, double xi) {
  using namespace std::complex_literals;
  switch (law.family) {
    case LawFamily::Gaussian:
      return std::complex<double>(std::exp(-0.5 * law.sigma0 * law.sigma0 * xi * xi), 0.0);
    case LawFamily::PointMass:
      return std::exp(1i * (law.m0 * xi));
    case LawFamily::Rademacher:
      return std::complex<double>(std::cos(xi), 0.0);
    case LawFamily::SymmetricPareto:
    case LawFamily::SkewPareto:
      return std::nullopt;
  }
  return std::nullopt;
}

HGammaProfile classify(const InitialLaw& law, double gamma) {
  if (!(gamma > 0.0) || !(gamma <= 2.0))
    throw HypothesisError("classify: gamma must lie in (0,2]");
  HGammaProfile p;
  p.gamma = gamma;

  const bool is_one = std::fabs(gamma - 1.0) < kGammaTol;
  const bool is_two = std::fabs(gamma - 2.0) < kGammaTol;

  auto fill_tail_constants = [&] {
    const double s = p.c0_plus + p.c0_minus;
    p.k0 = s * M_PI / (2.0 * std::tgamma(gamma) * std::sin(M_PI * gamma / 2.0));
    p.eta0 = (p.c0_plus - p.c0_minus) / s;
  };

  switch (law.family) {
    case LawFamily::Gaussian:
      if (is_two) {
        p.h_case = HGammaCase::H2;
        p.sigma0_sq = law.sigma0 * law.sigma0;
        return p;
      }
      if (is_one) {
        p.h_case = HGammaCase::H1a;  // integrable with mean 0
        p.m0 = 0.0;
        return p;
      }
      throw HypothesisError("classify: Gaussian tails carry no x^{-gamma} constant at gamma=" +
                            std::to_string(gamma));
    case LawFamily::PointMass:
      if (is_one) {
        p.h_case = HGammaCase::H1a;
        p.m0 = law.m0;
        return p;
      }
      if (is_two && law.m0 == 0.0)
        throw HypothesisError("classify: point mass at 0 has sigma0^2 = 0, (H_2) needs it positive");
      throw HypothesisError("classify: point mass only satisfies (H_1)(a)");
    case LawFamily::Rademacher:
      if (is_two) {
        p.h_case = HGammaCase::H2;
        p.sigma0_sq = 1.0;
        return p;
      }
      if (is_one) {
        p.h_case = HGammaCase::H1a;
        p.m0 = 0.0;
        return p;
      }
      throw HypothesisError("classify: Rademacher has bounded support, tails vanish at gamma=" +
                            std::to_string(gamma));
    case LawFamily::SymmetricPareto: {
      if (std::fabs(gamma - law.gamma) < kGammaTol) {
        p.c0_plus = law.c0_plus;
        p.c0_minus = law.c0_minus;
        if (is_one) {
          p.h_case = HGammaCase::H1b;  // symmetric by construction
          return p;
        }
        p.h_case = HGammaCase::Hgeneral;
        fill_tail_constants();
        return p;
      }
      if (is_one && law.gamma > 1.0) {
        p.h_case = HGammaCase::H1a;  // integrable, symmetric: mean 0
        p.m0 = 0.0;
        return p;
      }
      throw HypothesisError("classify: Pareto tail exponent " + std::to_string(law.gamma) +
                            " does not satisfy (H_gamma) at gamma=" + std::to_string(gamma));
    }
    case LawFamily::SkewPareto: {
      if (std::fabs(gamma - law.gamma) < kGammaTol) {
        p.c0_plus = law.c0_plus;
        p.c0_minus = law.c0_minus;
        p.h_case = HGammaCase::Hgeneral;
        fill_tail_constants();
        return p;
      }
      if (is_one && law.gamma > 1.0) {
        p.h_case = HGammaCase::H1a;  // centered by construction
        p.m0 = 0.0;
        return p;
      }
      throw HypothesisError("classify: skew Pareto tail exponent " + std::to_string(law.gamma) +
                            " does not satisfy (H_gamma) at gamma=" + std::to_string(gamma));
    }
  }
  throw HypothesisError("classify: unknown family");
}

std::complex<double> stable_cf(const HGammaProfile& p, double xi) {
  using namespace std::complex_literals;
  switch (p.h_case) {
    case HGammaCase::H1a:
      return std::exp(1i * (p.m0 * xi));
    case HGammaCase::H1b:
      return std::complex<double>(std::exp(-M_PI * p.c0_plus * std::fabs(xi)), 0.0);
    case HGammaCase::H2:
      return std::complex<double>(std::exp(-0.5 * p.sigma0_sq * xi * xi), 0.0);
    case HGammaCase::Hgeneral: {
      const double sgn = xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0);
      const std::complex<double> expo =
          -p.k0 * std::pow(std::fabs(xi), p.gamma) *
          (1.0 - 1i * (p.eta0 * std::tan(M_PI * p.gamma / 2.0) * sgn));
      return std::exp(expo);
    }
  }
  return {1.0, 0.0};
}

double sample_stable(CounterRng& rng, const HGammaProfile& p) {
  switch (p.h_case) {
    case HGammaCase::H1a:
      return p.m0;
    case HGammaCase::H1b:
      // exp(-pi c0+ |xi|) is the Cauchy CF with scale pi c0+.
      return M_PI * p.c0_plus * std::tan(M_PI * (rng.u01_open() - 0.5));
    case HGammaCase::H2:
      return std::sqrt(p.sigma0_sq) * rng.normal();
    case HGammaCase::Hgeneral: {
      // Chambers-Mallows-Stuck for the S1 parameterization
      //   exp(-sigma^gamma |xi|^gamma (1 - i beta tan(pi gamma/2) sign xi)),
      // with beta = eta0 and sigma = k0^{1/gamma}.
      const double alpha = p.gamma;
      const double beta = p.eta0;
      const double V = M_PI * (rng.u01_open() - 0.5);
      const double W = rng.exponential();
      const double theta = std::tan(M_PI * alpha / 2.0);
      const double B = std::atan(beta * theta) / alpha;
      const double S = std::pow(1.0 + beta * beta * theta * theta, 1.0 / (2.0 * alpha));
      const double X = S * std::sin(alpha * (V + B)) / std::pow(std::cos(V), 1.0 / alpha) *
                       std::pow(std::cos(V - alpha * (V + B)) / W, (1.0 - alpha) / alpha);
      return std::pow(p.k0, 1.0 / alpha) * X;
    }
  }
  return 0.0;
}

}  // namespace kacsim
