#ifndef KACSIM_FIXEDPOINT_HPP
#define KACSIM_FIXEDPOINT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kacsim/kernel.hpp"

namespace kacsim {

// Empirical population representing the mean-one mixing law: the law of Y
// solving Y =d Theta^{S(gamma)} sum_i A_i^gamma Y_i with Theta uniform(0,1).
struct MixingLaw {
  std::vector<double> population;  // nonnegative, mean renormalized to 1
  double gamma = 0.0;
  std::string kernel_label;
  int sweeps_run = 0;
  bool converged = false;
  double final_update_distance = 0.0;  // sorted-population W1 of the last sweep
};

// The two equivalent update forms of the fixed-point equation. The Dirichlet
// form evolves the law of the weight-martingale limit; rescaling it by
// c_gamma^gamma Z^{S/(N-1)} with Z ~ Gamma(1/(N-1),1) recovers the Theta form.
enum class UpdateForm { ThetaUniform, DirichletWeights };

struct MixingOptions {
  std::int64_t pop_size = 100000;
  int max_sweeps = 200;
  double tol = 1e-3;  // stop when successive sorted populations are this close in W1
  int workers = 0;
  UpdateForm form = UpdateForm::ThetaUniform;
};

// Population dynamics for the mixing law. The caller is responsible for the
// existence check mu(delta) < mu(gamma), delta > gamma (see exists_delta_above).
// Throws NumericError when sum_i A_i^gamma vanishes almost surely.
MixingLaw solve_mixing(std::uint64_t seed, const KernelSpec& spec, double gamma,
                       const MixingOptions& opts = {});

// Applies one extra update sweep and returns the sorted-population W1 change
// (fixed-point consistency diagnostic).
double resample_distance(std::uint64_t seed, const MixingLaw& mixing, const KernelSpec& spec,
                         const MixingOptions& opts = {});

// Exact E[Y^2] from the pairwise weight moments:
//   E[Y^2] = cross / (2 S(gamma) + 1 - s2), +inf when the denominator is <= 0
// (equivalently when a_gamma(2) >= 1, i.e. 2 gamma >= q*_gamma).
double exact_second_moment(const KernelSpec& spec, double gamma);

// Empirical moment E[Y^{p/gamma}] of the population plus the finiteness
// prediction p < q*_gamma; nested-prefix growth diagnostic when predicted
// infinite.
struct MomentEstimate {
  double estimate = 0.0;
  bool predicted_finite = true;
  std::vector<double> growth;  // estimates on prefixes P/4, P/2, P (when predicted infinite)
};
MomentEstimate mixing_moment(const MixingLaw& mixing, double p_over_gamma, double q_star);

}  // namespace kacsim

#endif
