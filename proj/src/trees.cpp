#include "kacsim/trees.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "kacsim/errors.hpp"

namespace kacsim {

namespace detail {

void grow_into(CounterRng& rng, const KernelSpec& spec, std::int64_t size, TreeBuffers& buf) {
  const int N = spec.n_children;
  buf.weights.clear();
  buf.branch.clear();
  buf.subtree_sizes.assign(N, 0);
  buf.weights.reserve(leaf_count(N, size));
  buf.branch.reserve(leaf_count(N, size));
  buf.weights.push_back(1.0);
  buf.branch.push_back(0);

  double draw[64];
  for (std::int64_t step = 0; step < size; ++step) {
    const std::uint64_t j = rng.uniform_below(buf.weights.size());
    spec.sample_weights(rng, std::span<double>(draw, N));
    const double beta = buf.weights[j];
    if (step == 0) {
      // Root expansion: children are the roots of the N subtrees.
      buf.weights[j] = beta * draw[0];
      buf.branch[j] = 0;
      for (int c = 1; c < N; ++c) {
        buf.weights.push_back(beta * draw[c]);
        buf.branch.push_back(static_cast<std::uint8_t>(c));
      }
    } else {
      const std::uint8_t tag = buf.branch[j];
      buf.subtree_sizes[tag] += 1;
      buf.weights[j] = beta * draw[0];
      for (int c = 1; c < N; ++c) {
        buf.weights.push_back(beta * draw[c]);
        buf.branch.push_back(tag);
      }
    }
  }
}

}  // namespace detail

WeightedTree grow_tree(CounterRng& rng, const KernelSpec& spec, std::int64_t size) {
  if (size < 0) throw NumericError("grow_tree: size must be >= 0");
  detail::TreeBuffers buf;
  detail::grow_into(rng, spec, size, buf);
  WeightedTree tree;
  tree.n_children = spec.n_children;
  tree.size = size;
  tree.leaf_weights = std::move(buf.weights);
  tree.subtree_sizes = std::move(buf.subtree_sizes);
  return tree;
}

Rational shape_probability_exact(int n_children, const std::vector<std::int64_t>& sizes) {
  if (static_cast<int>(sizes.size()) != n_children)
    throw NumericError("shape_probability: sizes length must equal n_children");
  std::int64_t k = 1;
  for (std::int64_t s : sizes) {
    if (s < 0) throw NumericError("shape_probability: negative subtree size");
    k += s;
  }
  if (k > 20) throw NumericError("shape_probability_exact: k > 20, use the log-space form");

  auto f = [&](std::int64_t m) { return (n_children - 1) * m + 1; };
  // Multinomial (k-1 choose i_1,...,i_N) built incrementally as binomials.
  Rational p(1, 1);
  std::int64_t remaining = k - 1;
  for (std::int64_t s : sizes) {
    for (std::int64_t t = 1; t <= s; ++t) {
      p = p * Rational(remaining - s + t, t);
    }
    remaining -= s;
  }
  for (std::int64_t s : sizes)
    for (std::int64_t m = 0; m < s; ++m) p = p * Rational(f(m), 1);
  for (std::int64_t r = 0; r < k; ++r) p = p * Rational(1, f(r));
  return p;
}

double shape_probability(int n_children, const std::vector<std::int64_t>& sizes) {
  std::int64_t k = 1;
  for (std::int64_t s : sizes) k += s;
  if (k <= 20) return shape_probability_exact(n_children, sizes).to_double();

  // Log-space Pochhammer form: prod_{m<i} f_m = (N-1)^i (1/(N-1))_i.
  const double r = 1.0 / (n_children - 1);
  const double logN1 = std::log(static_cast<double>(n_children - 1));
  double logp = std::lgamma(static_cast<double>(k));  // (k-1)!
  for (std::int64_t s : sizes) {
    if (s < 0) throw NumericError("shape_probability: negative subtree size");
    logp -= std::lgamma(static_cast<double>(s) + 1.0);
    logp += static_cast<double>(s) * logN1 + log_pochhammer(r, static_cast<double>(s));
  }
  logp -= static_cast<double>(k) * logN1 + log_pochhammer(r, static_cast<double>(k));
  return std::exp(logp);
}

WeightNorm expected_weight_norm(const KernelSpec& spec, double gamma, std::int64_t n) {
  const double S = spectral_S(spec, gamma);
  if (!std::isfinite(S)) throw NumericError("expected_weight_norm: S(gamma) is infinite");
  if (n < 0) throw NumericError("expected_weight_norm: n must be >= 0");
  const int N = spec.n_children;

  WeightNorm out;
  double product = 1.0;
  for (std::int64_t k = 0; k < n; ++k)
    product *= 1.0 + S / static_cast<double>(leaf_count(N, k));
  out.product_form = product;

  const double a = (S + 1.0) / (N - 1);
  const double b = 1.0 / (N - 1);
  out.pochhammer_form =
      std::exp(log_pochhammer(a, static_cast<double>(n)) - log_pochhammer(b, static_cast<double>(n)));

  // 1e-10 relative holds through n = 1e4; beyond that lgamma's own rounding
  // (~|log m_n| * eps) dominates, so the guard scales with n.
  const double tol = 1e-10 * std::max(1.0, static_cast<double>(n) / 1e4);
  const double rel = std::fabs(out.product_form - out.pochhammer_form) /
                     std::max(1e-300, std::fabs(out.pochhammer_form));
  if (rel > tol)
    throw NumericError("expected_weight_norm: product and Pochhammer forms disagree");

  out.asymptotic_form = n == 0 ? std::tgamma(b) / std::tgamma(a)
                               : std::pow(static_cast<double>(n), S / (N - 1)) *
                                     std::tgamma(b) / std::tgamma(a);
  out.value = out.product_form;
  return out;
}

double c_gamma(const KernelSpec& spec, double gamma) {
  const double S = spectral_S(spec, gamma);
  if (!std::isfinite(S)) throw NumericError("c_gamma: S(gamma) is infinite");
  const int N = spec.n_children;
  const double a = (S + 1.0) / (N - 1);
  const double b = 1.0 / (N - 1);
  return std::pow(std::tgamma(b) / std::tgamma(a), 1.0 / gamma);
}

WeightStats weight_stats(const WeightedTree& tree, double gamma, const KernelSpec& spec) {
  WeightStats st;
  st.gamma = gamma;
  double M = 0.0, bmax = 0.0;
  for (double b : tree.leaf_weights) {
    M += pow0(b, gamma);
    bmax = std::max(bmax, b);
  }
  const double m_n = expected_weight_norm(spec, gamma, tree.size).value;
  st.M = M;
  st.M_tilde = M / m_n;
  st.beta_max = bmax / std::pow(m_n, 1.0 / gamma);
  return st;
}

namespace {

// The root-subtree size vector evolves as a Polya urn: branch j gains the next
// internal node with probability f_{i_j} / f_k.
void urn_fractions(CounterRng& rng, int N, std::int64_t size, double* out) {
  std::vector<std::int64_t> counts(N, 0);
  for (std::int64_t k = 1; k < size; ++k) {
    const std::int64_t total_leaves = leaf_count(N, k);
    std::int64_t u = static_cast<std::int64_t>(rng.uniform_below(total_leaves));
    int chosen = N - 1;
    for (int j = 0; j < N; ++j) {
      const std::int64_t fj = leaf_count(N, counts[j]);
      if (u < fj) {
        chosen = j;
        break;
      }
      u -= fj;
    }
    counts[chosen] += 1;
  }
  for (int j = 0; j < N; ++j)
    out[j] = static_cast<double>(counts[j]) / static_cast<double>(size);
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

template <class Fn>
void parallel_for(std::int64_t count, int workers, Fn&& fn) {
  workers = std::min<std::int64_t>(resolve_workers(workers), std::max<std::int64_t>(1, count));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<double> subtree_fraction_sample(std::uint64_t seed, int n_children,
                                            std::int64_t size, std::int64_t batch,
                                            int workers) {
  if (size < 1) throw NumericError("subtree_fraction_sample: size must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(batch) * n_children);
  const std::uint64_t base = mix_seed(seed, 0x55524eull /*'URN'*/);
  parallel_for(batch, workers, [&](std::int64_t i) {
    CounterRng rng(base, static_cast<std::uint64_t>(i));
    urn_fractions(rng, n_children, size, out.data() + static_cast<std::size_t>(i) * n_children);
  });
  return out;
}

std::vector<TreeStatsRow> tree_stats_batch(std::uint64_t seed, const KernelSpec& spec,
                                           double gamma, std::int64_t size,
                                           std::int64_t count, int workers) {
  const double m_n = expected_weight_norm(spec, gamma, size).value;
  const double m_n_root = std::pow(m_n, 1.0 / gamma);
  std::vector<TreeStatsRow> rows(count);
  const std::uint64_t base = mix_seed(seed, 0x5452454531ull /*'TREE1'*/);
  parallel_for(count, workers, [&](std::int64_t i) {
    CounterRng rng(base, static_cast<std::uint64_t>(i));
    detail::TreeBuffers buf;
    detail::grow_into(rng, spec, size, buf);
    TreeStatsRow& row = rows[i];
    row.size = size;
    double M = 0.0, bmax = 0.0;
    for (double b : buf.weights) {
      M += pow0(b, gamma);
      bmax = std::max(bmax, b);
    }
    row.M = M;
    row.M_tilde = M / m_n;
    row.beta_max = bmax / m_n_root;
    row.subtree_sizes = buf.subtree_sizes;
  });
  return rows;
}

}  // namespace kacsim
