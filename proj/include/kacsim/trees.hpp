#ifndef KACSIM_TREES_HPP
#define KACSIM_TREES_HPP

#include <cstdint>
#include <vector>

#include "kacsim/kernel.hpp"
#include "kacsim/numeric.hpp"
#include "kacsim/rng.hpp"

namespace kacsim {

// Random N-ary recursive tree, stored flat: only the per-leaf multiplicative
// weights and the root-subtree sizes are consumed downstream. A tree of size k
// (internal nodes) has f_k = (N-1)k + 1 leaves.
struct WeightedTree {
  int n_children = 2;
  std::int64_t size = 0;
  std::vector<double> leaf_weights;        // left-to-right insertion order
  std::vector<std::int64_t> subtree_sizes; // internal-node counts of the N root subtrees
};

inline std::int64_t leaf_count(int n_children, std::int64_t size) {
  return (n_children - 1) * size + 1;
}

// Grows a tree by uniform leaf expansion: the chosen leaf becomes internal,
// its N children receive weights beta * A_j from a fresh kernel draw. O(1)
// bookkeeping per step (replace-first-child, append the rest).
WeightedTree grow_tree(CounterRng& rng, const KernelSpec& spec, std::int64_t size);

namespace detail {
// Buffer-reusing variant for hot sampling loops.
struct TreeBuffers {
  std::vector<double> weights;
  std::vector<std::uint8_t> branch;  // root-branch tag per leaf
  std::vector<std::int64_t> subtree_sizes;
};
void grow_into(CounterRng& rng, const KernelSpec& spec, std::int64_t size, TreeBuffers& buf);
}  // namespace detail

// Exact probability that the root subtrees of a size-k tree have the given
// internal-node counts (k = 1 + sum sizes). Rational arithmetic up to k = 20.
Rational shape_probability_exact(int n_children, const std::vector<std::int64_t>& sizes);
// Same in double precision; log-gamma evaluation beyond k = 20.
double shape_probability(int n_children, const std::vector<std::int64_t>& sizes);

// m_n(gamma) = E[M_n(gamma)], computed by the running product over leaf counts
// and by the Pochhammer ratio; the two routes must agree to 1e-10 relative.
struct WeightNorm {
  double value = 0.0;            // the product form
  double product_form = 0.0;
  double pochhammer_form = 0.0;
  double asymptotic_form = 0.0;  // n^{S/(N-1)} Gamma(1/(N-1)) / Gamma((S+1)/(N-1))
};
WeightNorm expected_weight_norm(const KernelSpec& spec, double gamma, std::int64_t n);

// Scale constant of the joint clock/weight limit:
//   c_gamma = (Gamma(1/(N-1)) / Gamma((S(gamma)+1)/(N-1)))^{1/gamma}.
double c_gamma(const KernelSpec& spec, double gamma);

// Per-tree weight statistics for the martingale M_n(gamma) = sum beta^gamma.
struct WeightStats {
  double gamma = 0.0;
  double M = 0.0;         // sum of beta^gamma
  double M_tilde = 0.0;   // M / m_n(gamma)
  double beta_max = 0.0;  // max beta / m_n(gamma)^{1/gamma}
};
WeightStats weight_stats(const WeightedTree& tree, double gamma, const KernelSpec& spec);

// Batch of root-subtree size fractions (i_1/n, ..., i_N/n) for trees of the
// given size, sampled via the equivalent Polya-urn dynamics of the subtree
// sizes. Row-major: batch rows of n_children fractions.
std::vector<double> subtree_fraction_sample(std::uint64_t seed, int n_children,
                                            std::int64_t size, std::int64_t batch,
                                            int workers = 0);

// One row of the tree-stats export: per-tree statistics plus subtree sizes.
struct TreeStatsRow {
  std::int64_t size = 0;
  double M = 0.0;
  double M_tilde = 0.0;
  double beta_max = 0.0;
  std::vector<std::int64_t> subtree_sizes;
};
std::vector<TreeStatsRow> tree_stats_batch(std::uint64_t seed, const KernelSpec& spec,
                                           double gamma, std::int64_t size,
                                           std::int64_t count, int workers = 0);

}  // namespace kacsim

#endif
