#ifndef KACSIM_WILD_HPP
#define KACSIM_WILD_HPP

#include <complex>
#include <cstdint>

#include "kacsim/initial_data.hpp"
#include "kacsim/kernel.hpp"

namespace kacsim {

// Truncated Wild-series evaluation of the solution's characteristic function,
// phi(t, xi) = sum_k zeta(t,k) q_k(xi): an exact oracle for discrete kernels
// and initial laws with elementary CFs.

struct WildEvaluation {
  double xi = 0.0;
  double t = 0.0;
  int truncation = 0;
  std::complex<double> value{0.0, 0.0};  // partial sum over k <= K
  double tail_bound = 0.0;               // 1 - sum_{k<=K} zeta(t,k); |q_k| <= 1 makes it rigorous
};

// q_k(xi) by direct recursion over tree-shape compositions:
//   q_0 = phi_0,  q_k = sum_i p_k(i) sum_atoms w_a prod_j q_{i_j}(A_j^(a) xi).
// No memoization: cost is bounded by the configured K (~(2 atoms N)^K), which
// the shipped scenarios keep under ~10^7 complex operations.
// Throws UnsupportedError for non-discrete kernels or CF-less laws.
std::complex<double> wild_q(const KernelSpec& spec, const InitialLaw& law, std::int64_t k,
                            double xi);

WildEvaluation wild_solution(const KernelSpec& spec, const InitialLaw& law, double t, double xi,
                             int truncation = 12);

}  // namespace kacsim

#endif
