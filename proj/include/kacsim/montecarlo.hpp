#ifndef KACSIM_MONTECARLO_HPP
#define KACSIM_MONTECARLO_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kacsim/fixedpoint.hpp"
#include "kacsim/initial_data.hpp"
#include "kacsim/kernel.hpp"
#include "kacsim/rng.hpp"

namespace kacsim {

// A batch of i.i.d. real draws with its provenance.
struct SampleBatch {
  std::vector<double> values;
  double t = 0.0;
  bool t_is_infinity = false;
  std::optional<double> rescale_gamma;
  std::uint64_t seed = 0;
  std::string kernel_label;
  std::string law_label;
};

// Sampler for nu_t ~ NegativeBinomial(1/(N-1), e^{-(N-1)t}): inversion on the
// running CDF of zeta(t,k) = b_k e^{-t} (1 - e^{-(N-1)t})^k, extended on demand.
class NuSampler {
 public:
  NuSampler(double t, int n_children);
  std::int64_t operator()(CounterRng& rng);
  double mean() const;  // (e^{(N-1)t} - 1) / (N-1)

 private:
  void extend();
  double t_;
  int n_children_;
  double tail_factor_;         // 1 - e^{-(N-1)t}
  std::vector<double> cumulative_; // running CDF
  double last_term_;               // zeta(t, k_max)
};

std::int64_t sample_nu(CounterRng& rng, double t, int n_children);

struct SolutionOptions {
  std::optional<double> rescale_gamma;
  double expected_nodes_cap = 1e7;  // abort above this E[nu_t], with a cost estimate
};

// One draw of V_t = sum over leaves of beta(v) X_v, where the tree has nu_t
// internal nodes; rescaled by e^{-mu(gamma) t} when requested.
double sample_solution(CounterRng& rng, const KernelSpec& spec, const InitialLaw& law,
                       double t, const SolutionOptions& opts = {});

struct BatchOptions {
  std::optional<double> rescale_gamma;
  int workers = 0;  // 0: hardware concurrency
  double expected_nodes_cap = 1e7;
};

// count i.i.d. draws of sample_solution. Sample i always uses the counter
// stream (seed, i), so the output is identical for every worker count.
SampleBatch sample_batch(std::uint64_t seed, const KernelSpec& spec, const InitialLaw& law,
                         double t, std::int64_t count, const BatchOptions& opts = {});

// One draw of the limit variable V_infinity: Y from the mixing population,
// then Y^{1/gamma} times a stable draw (m0 * Y in the H1a case).
double sample_limit(CounterRng& rng, const MixingLaw& mixing, const HGammaProfile& profile);

SampleBatch sample_limit_batch(std::uint64_t seed, const MixingLaw& mixing,
                               const HGammaProfile& profile, std::int64_t count,
                               int workers = 0);

// CF of the limit law evaluated through the mixing population:
// (1/P) sum_i g_gamma(xi Y_i^{1/gamma})  (H1a: mean of exp(i xi m0 Y_i)).
std::complex<double> limit_cf(const MixingLaw& mixing, const HGammaProfile& profile, double xi);

// Clock limit: KS statistic of nu_t e^{-(N-1)t} against Gamma(1/(N-1), 1).
struct ClockCheck {
  double ks = 0.0;
  double c_gamma = 0.0;      // scale constant for limit assembly, needs (spec, gamma)
  bool scale_warning = false;  // e^{-(N-1)t} >= 0.05: t too small for the limit regime
};
ClockCheck gamma_clock_check(std::uint64_t seed, double t, int n_children, std::int64_t count,
                             const KernelSpec* spec = nullptr, double gamma = 0.0);

}  // namespace kacsim

#endif
