#ifndef KACSIM_KERNEL_HPP
#define KACSIM_KERNEL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kacsim/rng.hpp"

namespace kacsim {

// ---------------------------------------------------------------------------
// Collision kernel specification: the law of the nonnegative weight vector
// A = (A_1, ..., A_N).
// ---------------------------------------------------------------------------

enum class KernelLaw { Deterministic, DiscreteMixture, IndependentComponents };

enum class MarginalKind {
  Constant,              // A_i = c
  Uniform01Power,        // A_i = U^p, U uniform on (0,1)
  ComplementUniformPower,// A_i = (1-U_j)^p, sharing the uniform of component j
  Beta                   // A_i ~ Beta(a, b)
};

struct MarginalSpec {
  MarginalKind kind = MarginalKind::Constant;
  double a = 0.0;   // Constant: c; Uniform01Power/ComplementUniformPower: p; Beta: a
  double b = 0.0;   // Beta: b
  int partner = -1; // ComplementUniformPower: index of the Uniform01Power component
};

struct MixtureAtom {
  double probability = 0.0;
  std::vector<double> weights;
};

struct KernelSpec {
  int n_children = 2;
  KernelLaw law = KernelLaw::Deterministic;
  std::vector<double> atom;            // Deterministic
  std::vector<MixtureAtom> mixture;    // DiscreteMixture
  std::vector<MarginalSpec> marginals; // IndependentComponents
  std::string label;

  static KernelSpec deterministic(std::vector<double> weights, std::string label = {});
  static KernelSpec discrete_mixture(std::vector<MixtureAtom> atoms, std::string label = {});
  static KernelSpec independent(std::vector<MarginalSpec> marginals, std::string label = {});

  // Named kernels used across the experiments:
  //   "kac2"         -> (sqrt(U), sqrt(1-U)), conservative at gamma = 2
  //   "uniform-pair" -> (U, 1-U), conservative at gamma = 1
  static KernelSpec preset(const std::string& name);

  // Throws ConfigError on malformed specs (negative weights, probabilities not
  // summing to 1, bad complement partners, N mismatches).
  void check_well_formed() const;

  // One draw of (A_1, ..., A_N); out must have n_children entries.
  void sample_weights(CounterRng& rng, std::span<double> out) const;
  // One draw of (A_1^gamma, ..., A_N^gamma), avoiding the double pow.
  void sample_weights_pow(CounterRng& rng, double gamma, std::span<double> out) const;

  // True when sum_i A_i^gamma = 1 almost surely, detected exactly for
  // Deterministic/DiscreteMixture and structurally for coupled uniform pairs.
  bool is_conservative(double gamma) const;
};

// ---------------------------------------------------------------------------
// (H0-1) validation
// ---------------------------------------------------------------------------

struct ConditionResult {
  std::string name;
  bool passed = false;
  double value = 0.0;  // the probability / expectation the condition constrains
};

struct ValidationReport {
  bool passed = false;
  ConditionResult conditions[3];
  std::string method;  // "exact" or "closed-form"
};

// Evaluates the three standing conditions on the kernel law:
//   (1) P{ sum 1{A_i>0} in {0,1} } < 1
//   (2) E[ sum 1{A_i>0} ] > 1
//   (3) P{ A_i in {0,1} for all i } < 1
// Malformed specs throw ConfigError; hypothesis failures are reported, not thrown.
ValidationReport validate_kernel(const KernelSpec& spec);

// ---------------------------------------------------------------------------
// Spectral function
// ---------------------------------------------------------------------------

struct SpectralProfile {
  double gamma = 0.0;
  double s = 0.0;
  double S = 0.0;       // S(s) = E[sum A_j^s] - 1, +inf when divergent
  double mu = 0.0;      // mu(s) = S(s)/s for s > 0
  double q_star = 0.0;  // conjugate exponent at `gamma`
};

// S(s) = E[sum_j A_j^s] - 1 under 0^0 = 0. Exact summation for discrete laws,
// closed form for uniform powers, 64-node Gauss-Legendre for Beta marginals.
// Throws NumericError for s < 0.
double spectral_S(const KernelSpec& spec, double s);

// mu(s) = S(s)/s, s > 0 (+inf at s = 0, where S(0) > 0 under (H0-1)).
double spectral_mu(const KernelSpec& spec, double s);

// (s, S(s), mu(s)) fragment; gamma and q_star left zero.
SpectralProfile spectral(const KernelSpec& spec, double s);

// Monte Carlo route for S(s); independent check of the exact/quadrature path.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
McEstimate spectral_mc(const KernelSpec& spec, double s, std::int64_t n_samples,
                       std::uint64_t seed);

struct ConjugateOptions {
  double s_max = 64.0;     // search cap (the paper gives no bound; diagnostic when binding)
  double tol = 1e-9;       // absolute bisection tolerance on q
  int grid_points = 4096;
};

struct ConjugateResult {
  double q_star = 0.0;          // +inf when the only solution of mu(q)=mu(gamma) is q=gamma
  bool monotone = false;        // mu profile monotone: no second crossing can exist
  bool s_max_binding = false;   // search cap reached without a bracket
};

// Unique q != gamma with mu(q) = mu(gamma), found by bracketed bisection on
// (0, s_max]; +inf by convention when no such q exists.
ConjugateResult conjugate_exponent_full(const KernelSpec& spec, double gamma,
                                        const ConjugateOptions& opts = {});
double conjugate_exponent(const KernelSpec& spec, double gamma,
                          const ConjugateOptions& opts = {});

// True when mu(delta) < mu(gamma) for some delta > gamma (the existence regime
// for the nondegenerate self-similar limit), scanned on (gamma, s_max].
bool exists_delta_above(const KernelSpec& spec, double gamma, double s_max = 64.0);

// Pairwise moments of the weight vector at exponent gamma:
//   s1 = E[sum A_i^gamma], s2 = E[sum A_i^{2 gamma}],
//   cross = E[sum_{i != j} A_i^gamma A_j^gamma].
struct WeightMoments {
  double s1 = 0.0;
  double s2 = 0.0;
  double cross = 0.0;
};
WeightMoments weight_moments(const KernelSpec& spec, double gamma);

}  // namespace kacsim

#endif
