#include "kacsim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kacsim/errors.hpp"
#include "kacsim/numeric.hpp"

namespace kacsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kProbTol = 1e-12;

bool is01(double x) { return x == 0.0 || x == 1.0; }

// E[A^s] of a single marginal under 0^0 = 0.
double marginal_moment(const MarginalSpec& m, double s) {
  switch (m.kind) {
    case MarginalKind::Constant:
      return pow0(m.a, s);
    case MarginalKind::Uniform01Power:
    case MarginalKind::ComplementUniformPower:
      // E[U^{ps}] = 1/(ps+1); the complement has the same marginal law.
      return 1.0 / (m.a * s + 1.0);
    case MarginalKind::Beta: {
      // 64-node Gauss-Legendre on the normalized Beta density, per the module
      // contract; a 128-node refinement guards against silent divergence.
      const double logB = std::lgamma(m.a) + std::lgamma(m.b) - std::lgamma(m.a + m.b);
      auto integrate = [&](int n) {
        const QuadratureRule& q = gauss_legendre_01(n);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          const double x = q.nodes[i];
          acc += q.weights[i] *
                 std::exp((m.a + s - 1.0) * std::log(x) + (m.b - 1.0) * std::log1p(-x) - logB);
        }
        return acc;
      };
      const double v64 = integrate(64);
      const double v128 = integrate(128);
      if (!std::isfinite(v64) || !std::isfinite(v128) || v128 > 1e6 * std::max(1.0, v64))
        return kInf;
      return v64;
    }
  }
  return 0.0;
}

}  // namespace

KernelSpec KernelSpec::deterministic(std::vector<double> weights, std::string label) {
  KernelSpec spec;
  spec.law = KernelLaw::Deterministic;
  spec.n_children = static_cast<int>(weights.size());
  spec.atom = std::move(weights);
  spec.label = std::move(label);
  spec.check_well_formed();
  return spec;
}

KernelSpec KernelSpec::discrete_mixture(std::vector<MixtureAtom> atoms, std::string label) {
  KernelSpec spec;
  spec.law = KernelLaw::DiscreteMixture;
  spec.n_children = atoms.empty() ? 0 : static_cast<int>(atoms.front().weights.size());
  spec.mixture = std::move(atoms);
  spec.label = std::move(label);
  spec.check_well_formed();
  return spec;
}

KernelSpec KernelSpec::independent(std::vector<MarginalSpec> marginals, std::string label) {
  KernelSpec spec;
  spec.law = KernelLaw::IndependentComponents;
  spec.n_children = static_cast<int>(marginals.size());
  spec.marginals = std::move(marginals);
  spec.label = std::move(label);
  spec.check_well_formed();
  return spec;
}

KernelSpec KernelSpec::preset(const std::string& name) {
  if (name == "kac2") {
    return independent({{MarginalKind::Uniform01Power, 0.5, 0.0, -1},
                        {MarginalKind::ComplementUniformPower, 0.5, 0.0, 0}},
                       "kac2");
  }
  if (name == "uniform-pair") {
    return independent({{MarginalKind::Uniform01Power, 1.0, 0.0, -1},
                        {MarginalKind::ComplementUniformPower, 1.0, 0.0, 0}},
                       "uniform-pair");
  }
  throw ConfigError("unknown kernel preset: " + name);
}

void KernelSpec::check_well_formed() const {
  if (n_children < 2) throw ConfigError("kernel: n_children must be >= 2");
  if (n_children > 64) throw ConfigError("kernel: n_children must be <= 64");
  switch (law) {
    case KernelLaw::Deterministic:
      if (static_cast<int>(atom.size()) != n_children)
        throw ConfigError("kernel: atom length does not match n_children");
      for (double a : atom)
        if (!(a >= 0.0)) throw ConfigError("kernel: negative or non-finite atom entry");
      break;
    case KernelLaw::DiscreteMixture: {
      if (mixture.empty()) throw ConfigError("kernel: empty mixture");
      double total = 0.0;
      for (const MixtureAtom& a : mixture) {
        if (static_cast<int>(a.weights.size()) != n_children)
          throw ConfigError("kernel: mixture atom length does not match n_children");
        if (!(a.probability >= 0.0)) throw ConfigError("kernel: negative mixture probability");
        for (double w : a.weights)
          if (!(w >= 0.0)) throw ConfigError("kernel: negative or non-finite atom entry");
        total += a.probability;
      }
      if (std::fabs(total - 1.0) > kProbTol)
        throw ConfigError("kernel: mixture probabilities must sum to 1 within 1e-12");
      break;
    }
    case KernelLaw::IndependentComponents: {
      if (static_cast<int>(marginals.size()) != n_children)
        throw ConfigError("kernel: marginal count does not match n_children");
      for (int i = 0; i < n_children; ++i) {
        const MarginalSpec& m = marginals[i];
        switch (m.kind) {
          case MarginalKind::Constant:
            if (!(m.a >= 0.0)) throw ConfigError("kernel: negative constant marginal");
            break;
          case MarginalKind::Uniform01Power:
            if (!(m.a > 0.0)) throw ConfigError("kernel: uniform power must be positive");
            break;
          case MarginalKind::ComplementUniformPower:
            if (!(m.a > 0.0)) throw ConfigError("kernel: uniform power must be positive");
            if (m.partner < 0 || m.partner >= i ||
                marginals[m.partner].kind != MarginalKind::Uniform01Power)
              throw ConfigError(
                  "kernel: complement marginal must reference an earlier uniform-power component");
            break;
          case MarginalKind::Beta:
            if (!(m.a > 0.0) || !(m.b > 0.0)) throw ConfigError("kernel: Beta parameters must be positive");
            break;
        }
      }
      break;
    }
  }
}

void KernelSpec::sample_weights(CounterRng& rng, std::span<double> out) const {
  sample_weights_pow(rng, 1.0, out);
}

void KernelSpec::sample_weights_pow(CounterRng& rng, double gamma, std::span<double> out) const {
  switch (law) {
    case KernelLaw::Deterministic:
      for (int i = 0; i < n_children; ++i) out[i] = pow0(atom[i], gamma);
      return;
    case KernelLaw::DiscreteMixture: {
      const double u = rng.u01();
      double cum = 0.0;
      const MixtureAtom* chosen = &mixture.back();
      for (const MixtureAtom& a : mixture) {
        cum += a.probability;
        if (u < cum) {
          chosen = &a;
          break;
        }
      }
      for (int i = 0; i < n_children; ++i) out[i] = pow0(chosen->weights[i], gamma);
      return;
    }
    case KernelLaw::IndependentComponents: {
      // Uniform draws are stored so complement components can reuse them.
      double uniforms[64];
      for (int i = 0; i < n_children; ++i) {
        const MarginalSpec& m = marginals[i];
        switch (m.kind) {
          case MarginalKind::Constant:
            out[i] = pow0(m.a, gamma);
            break;
          case MarginalKind::Uniform01Power: {
            const double u = rng.u01_open();
            uniforms[i] = u;
            const double e = m.a * gamma;
            out[i] = e == 1.0 ? u : std::pow(u, e);
            break;
          }
          case MarginalKind::ComplementUniformPower: {
            const double u = 1.0 - uniforms[m.partner];
            const double e = m.a * gamma;
            out[i] = e == 1.0 ? u : std::pow(u, e);
            break;
          }
          case MarginalKind::Beta: {
            const double ga = rng.gamma(m.a);
            const double gb = rng.gamma(m.b);
            out[i] = pow0(ga / (ga + gb), gamma);
            break;
          }
        }
      }
      return;
    }
  }
}

bool KernelSpec::is_conservative(double gamma) const {
  const double tol = 1e-12;
  switch (law) {
    case KernelLaw::Deterministic: {
      double s = 0.0;
      for (double a : atom) s += pow0(a, gamma);
      return std::fabs(s - 1.0) <= tol;
    }
    case KernelLaw::DiscreteMixture:
      return std::all_of(mixture.begin(), mixture.end(), [&](const MixtureAtom& a) {
        if (a.probability == 0.0) return true;
        double s = 0.0;
        for (double w : a.weights) s += pow0(w, gamma);
        return std::fabs(s - 1.0) <= tol;
      });
    case KernelLaw::IndependentComponents: {
      // Structural detection for (U^p, (1-U)^p, const 0...) style kernels:
      // sum A_i^gamma = U^{p gamma} + (1-U)^{p gamma} = 1 iff p*gamma = 1.
      int n_uniform = 0, n_complement = 0;
      for (const MarginalSpec& m : marginals) {
        switch (m.kind) {
          case MarginalKind::Constant:
            if (m.a != 0.0) return false;
            break;
          case MarginalKind::Uniform01Power:
            if (std::fabs(m.a * gamma - 1.0) > tol) return false;
            ++n_uniform;
            break;
          case MarginalKind::ComplementUniformPower:
            if (std::fabs(m.a * gamma - 1.0) > tol) return false;
            ++n_complement;
            break;
          case MarginalKind::Beta:
            return false;
        }
      }
      return n_uniform == 1 && n_complement == 1;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// (H0-1) validation
// ---------------------------------------------------------------------------

namespace {

ValidationReport validate_discrete(const KernelSpec& spec) {
  // Collect (probability, atom) pairs; Deterministic is a one-atom mixture.
  std::vector<MixtureAtom> atoms;
  if (spec.law == KernelLaw::Deterministic)
    atoms.push_back({1.0, spec.atom});
  else
    atoms = spec.mixture;

  double p_indicator_degenerate = 0.0;  // P{sum 1{A_i>0} in {0,1}}
  double mean_positive = 0.0;           // E[sum 1{A_i>0}]
  double p_all_binary = 0.0;            // P{A_i in {0,1} for all i}
  for (const MixtureAtom& a : atoms) {
    int n_pos = 0;
    bool all01 = true;
    for (double w : a.weights) {
      if (w > 0.0) ++n_pos;
      if (!is01(w)) all01 = false;
    }
    if (n_pos <= 1) p_indicator_degenerate += a.probability;
    mean_positive += a.probability * n_pos;
    if (all01) p_all_binary += a.probability;
  }

  ValidationReport rep;
  rep.method = "exact";
  rep.conditions[0] = {"P{sum 1{A_i>0} in {0,1}} < 1", p_indicator_degenerate < 1.0 - kProbTol,
                       p_indicator_degenerate};
  rep.conditions[1] = {"E[sum 1{A_i>0}] > 1", mean_positive > 1.0 + kProbTol, mean_positive};
  rep.conditions[2] = {"P{A_i in {0,1} for all i} < 1", p_all_binary < 1.0 - kProbTol,
                       p_all_binary};
  rep.passed = rep.conditions[0].passed && rep.conditions[1].passed && rep.conditions[2].passed;
  return rep;
}

ValidationReport validate_independent(const KernelSpec& spec) {
  // Every shipped marginal kind has almost-surely determined positivity and
  // {0,1} membership, so the three conditions reduce to closed form.
  int n_always_positive = 0;
  double p_all_binary = 1.0;
  for (const MarginalSpec& m : spec.marginals) {
    switch (m.kind) {
      case MarginalKind::Constant:
        if (m.a > 0.0) ++n_always_positive;
        if (!is01(m.a)) p_all_binary = 0.0;
        break;
      case MarginalKind::Uniform01Power:
      case MarginalKind::ComplementUniformPower:
      case MarginalKind::Beta:
        ++n_always_positive;  // support (0,1): positive a.s., never in {0,1}
        p_all_binary = 0.0;
        break;
    }
  }
  const double p_indicator_degenerate = n_always_positive <= 1 ? 1.0 : 0.0;
  const double mean_positive = static_cast<double>(n_always_positive);

  ValidationReport rep;
  rep.method = "closed-form";
  rep.conditions[0] = {"P{sum 1{A_i>0} in {0,1}} < 1", p_indicator_degenerate < 1.0 - kProbTol,
                       p_indicator_degenerate};
  rep.conditions[1] = {"E[sum 1{A_i>0}] > 1", mean_positive > 1.0 + kProbTol, mean_positive};
  rep.conditions[2] = {"P{A_i in {0,1} for all i} < 1", p_all_binary < 1.0 - kProbTol,
                       p_all_binary};
  rep.passed = rep.conditions[0].passed && rep.conditions[1].passed && rep.conditions[2].passed;
  return rep;
}

}  // namespace

ValidationReport validate_kernel(const KernelSpec& spec) {
  spec.check_well_formed();
  if (spec.law == KernelLaw::IndependentComponents) return validate_independent(spec);
  return validate_discrete(spec);
}

// ---------------------------------------------------------------------------
// Spectral function
// ---------------------------------------------------------------------------

double spectral_S(const KernelSpec& spec, double s) {
  if (s < 0.0) throw NumericError("spectral: s must be >= 0");
  double total = 0.0;
  switch (spec.law) {
    case KernelLaw::Deterministic:
      for (double a : spec.atom) total += pow0(a, s);
      break;
    case KernelLaw::DiscreteMixture:
      for (const MixtureAtom& a : spec.mixture) {
        double atom_sum = 0.0;
        for (double w : a.weights) atom_sum += pow0(w, s);
        total += a.probability * atom_sum;
      }
      break;
    case KernelLaw::IndependentComponents:
      for (const MarginalSpec& m : spec.marginals) {
        const double v = marginal_moment(m, s);
        if (!std::isfinite(v)) return kInf;
        total += v;
      }
      break;
  }
  return total - 1.0;
}

double spectral_mu(const KernelSpec& spec, double s) {
  if (s == 0.0) return kInf;  // S(0) > 0 under (H0-1)
  return spectral_S(spec, s) / s;
}

SpectralProfile spectral(const KernelSpec& spec, double s) {
  SpectralProfile p;
  p.s = s;
  p.S = spectral_S(spec, s);
  p.mu = s > 0.0 ? p.S / s : kInf;
  return p;
}

McEstimate spectral_mc(const KernelSpec& spec, double s, std::int64_t n_samples,
                       std::uint64_t seed) {
  if (s < 0.0) throw NumericError("spectral_mc: s must be >= 0");
  if (n_samples < 2) throw NumericError("spectral_mc: need at least 2 samples");
  CounterRng rng(mix_seed(seed, 0x53504543u /*'SPEC'*/), 0);
  std::vector<double> a(spec.n_children);
  double sum = 0.0, sum2 = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    spec.sample_weights(rng, a);
    double x = 0.0;
    for (double w : a) x += pow0(w, s);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / static_cast<double>(n_samples);
  const double var = std::max(0.0, sum2 / static_cast<double>(n_samples) - mean * mean);
  McEstimate est;
  est.value = mean - 1.0;
  est.std_error = std::sqrt(var / static_cast<double>(n_samples));
  return est;
}

ConjugateResult conjugate_exponent_full(const KernelSpec& spec, double gamma,
                                        const ConjugateOptions& opts) {
  if (!(gamma > 0.0)) throw NumericError("conjugate_exponent: gamma must be positive");
  const double S_gamma = spectral_S(spec, gamma);
  if (!std::isfinite(S_gamma)) throw NumericError("conjugate_exponent: S(gamma) is infinite");
  const double mu_gamma = S_gamma / gamma;

  // Roots of the convex function h(q) = S(q) - mu(gamma) q: one is q = gamma,
  // a second root (if any) is the conjugate exponent.
  auto h = [&](double q) {
    const double S = spectral_S(spec, q);
    return std::isfinite(S) ? S - mu_gamma * q : kInf;
  };

  ConjugateResult result;
  result.q_star = kInf;

  const int n = std::max(16, opts.grid_points);
  const double q_lo = 1e-8;
  std::vector<double> grid(n), values(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = q_lo + (opts.s_max - q_lo) * static_cast<double>(i) / (n - 1);
    values[i] = h(grid[i]);
  }

  const double sep = std::max(1e-6, 4.0 * (opts.s_max - q_lo) / (n - 1));
  // A monotone mu profile crosses the level mu(gamma) at most once, so the
  // solution q = gamma is unique and q* = +inf by convention.
  {
    bool mu_incr = true, mu_decr = true;
    double prev = (values[0] + mu_gamma * grid[0]) / grid[0];  // mu at grid[0]
    for (int i = 1; i < n; ++i) {
      const double cur = (values[i] + mu_gamma * grid[i]) / grid[i];
      if (cur > prev) mu_decr = false;
      if (cur < prev) mu_incr = false;
      prev = cur;
    }
    result.monotone = mu_incr || mu_decr;
  }

  for (int i = 0; i + 1 < n; ++i) {
    double lo = grid[i], hi = grid[i + 1];
    double flo = values[i], fhi = values[i + 1];
    if (flo == 0.0 && std::fabs(lo - gamma) > sep) {
      result.q_star = lo;
      return result;
    }
    if (!(flo * fhi < 0.0)) continue;
    // Bisect to tolerance.
    while (hi - lo > opts.tol) {
      const double mid = 0.5 * (lo + hi);
      const double fm = h(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (flo * fm < 0.0) {
        hi = mid;
        fhi = fm;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    const double root = 0.5 * (lo + hi);
    // A bracket against a divergence boundary is not a crossing of the level.
    const double residual = h(root);
    if (!std::isfinite(residual) ||
        std::fabs(residual) > 1e-6 * std::max(1.0, std::fabs(mu_gamma) * root))
      continue;
    if (std::fabs(root - gamma) > sep) {
      result.q_star = root;
      return result;
    }
  }
  // No second root inside (0, s_max]: either the profile is monotone or the
  // cap binds (reported so callers can widen the search).
  result.s_max_binding = !result.monotone;
  return result;
}

double conjugate_exponent(const KernelSpec& spec, double gamma, const ConjugateOptions& opts) {
  return conjugate_exponent_full(spec, gamma, opts).q_star;
}

bool exists_delta_above(const KernelSpec& spec, double gamma, double s_max) {
  const double mu_gamma = spectral_mu(spec, gamma);
  if (!std::isfinite(mu_gamma)) return false;
  auto below = [&](double delta) {
    const double mu_delta = spectral_mu(spec, delta);
    return std::isfinite(mu_delta) && mu_delta < mu_gamma;
  };
  // Geometric refinement toward gamma catches dips close to it.
  for (int j = 1; j <= 24; ++j) {
    const double delta = gamma * (1.0 + std::pow(0.5, j));
    if (delta < s_max && below(delta)) return true;
  }
  const int n = 512;
  for (int i = 1; i <= n; ++i) {
    const double delta = gamma + (s_max - gamma) * static_cast<double>(i) / n;
    if (delta <= gamma) continue;
    if (below(delta)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Pairwise weight moments (feeds the mixing-law moment oracle)
// ---------------------------------------------------------------------------

WeightMoments weight_moments(const KernelSpec& spec, double gamma) {
  WeightMoments wm;
  switch (spec.law) {
    case KernelLaw::Deterministic:
    case KernelLaw::DiscreteMixture: {
      std::vector<MixtureAtom> atoms;
      if (spec.law == KernelLaw::Deterministic)
        atoms.push_back({1.0, spec.atom});
      else
        atoms = spec.mixture;
      for (const MixtureAtom& a : atoms) {
        double s1 = 0.0, s2 = 0.0;
        for (double w : a.weights) {
          const double x = pow0(w, gamma);
          s1 += x;
          s2 += x * x;
        }
        wm.s1 += a.probability * s1;
        wm.s2 += a.probability * s2;
        wm.cross += a.probability * (s1 * s1 - s2);
      }
      return wm;
    }
    case KernelLaw::IndependentComponents: {
      const int n = spec.n_children;
      // Single-component moments at gamma and 2*gamma.
      std::vector<double> m1(n), m2(n);
      for (int i = 0; i < n; ++i) {
        m1[i] = marginal_moment(spec.marginals[i], gamma);
        m2[i] = marginal_moment(spec.marginals[i], 2.0 * gamma);
        wm.s1 += m1[i];
        wm.s2 += m2[i];
      }
      // Cross moments: components sharing an underlying uniform combine into
      // E[u^alpha (1-u)^beta] = B(alpha+1, beta+1); otherwise independence.
      auto uniform_id = [&](int i) {
        const MarginalSpec& m = spec.marginals[i];
        if (m.kind == MarginalKind::Uniform01Power) return i;
        if (m.kind == MarginalKind::ComplementUniformPower) return m.partner;
        return -1;
      };
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const int ui = uniform_id(i), uj = uniform_id(j);
          if (ui >= 0 && ui == uj) {
            double alpha = 0.0, beta = 0.0;  // exponents on u and (1-u)
            for (int k : {i, j}) {
              const MarginalSpec& m = spec.marginals[k];
              if (m.kind == MarginalKind::Uniform01Power)
                alpha += m.a * gamma;
              else
                beta += m.a * gamma;
            }
            wm.cross += std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                                 std::lgamma(alpha + beta + 2.0));
          } else {
            wm.cross += m1[i] * m1[j];
          }
        }
      }
      return wm;
    }
  }
  return wm;
}

}  // namespace kacsim
