#include "kacsim/wild.hpp"

#include <cmath>
#include <vector>

#include "kacsim/errors.hpp"
#include "kacsim/numeric.hpp"
#include "kacsim/trees.hpp"

namespace kacsim {

namespace {

struct WildContext {
  const InitialLaw& law;
  std::vector<MixtureAtom> atoms;  // Deterministic as a one-atom mixture
  int n_children;
};

std::complex<double> q_rec(const WildContext& ctx, std::int64_t k, double xi) {
  if (k == 0) {
    const auto cf = analytic_cf(ctx.law, xi);
    if (!cf)
      throw UnsupportedError("wild_q: initial law has no elementary characteristic function");
    return *cf;
  }
  std::complex<double> total{0.0, 0.0};
  std::vector<std::int64_t> sizes(ctx.n_children);
  for_each_composition(k - 1, ctx.n_children, [&](const std::vector<std::int64_t>& comp) {
    const double p = shape_probability(ctx.n_children, comp);
    std::complex<double> shape_sum{0.0, 0.0};
    for (const MixtureAtom& atom : ctx.atoms) {
      std::complex<double> prod{1.0, 0.0};
      for (int j = 0; j < ctx.n_children; ++j)
        prod *= q_rec(ctx, comp[j], atom.weights[j] * xi);
      shape_sum += atom.probability * prod;
    }
    total += p * shape_sum;
  });
  return total;
}

WildContext make_context(const KernelSpec& spec, const InitialLaw& law) {
  WildContext ctx{law, {}, spec.n_children};
  switch (spec.law) {
    case KernelLaw::Deterministic:
      ctx.atoms.push_back({1.0, spec.atom});
      break;
    case KernelLaw::DiscreteMixture:
      ctx.atoms = spec.mixture;
      break;
    case KernelLaw::IndependentComponents:
      throw UnsupportedError("wild_q: kernel must have finitely many atoms");
  }
  return ctx;
}

}  // namespace

std::complex<double> wild_q(const KernelSpec& spec, const InitialLaw& law, std::int64_t k,
                            double xi) {
  if (k < 0) throw NumericError("wild_q: k must be >= 0");
  const WildContext ctx = make_context(spec, law);
  return q_rec(ctx, k, xi);
}

WildEvaluation wild_solution(const KernelSpec& spec, const InitialLaw& law, double t, double xi,
                             int truncation) {
  if (t < 0.0) throw NumericError("wild_solution: t must be >= 0");
  if (truncation < 0) throw NumericError("wild_solution: truncation must be >= 0");
  const WildContext ctx = make_context(spec, law);

  WildEvaluation ev;
  ev.xi = xi;
  ev.t = t;
  ev.truncation = truncation;

  // zeta(t,k) = b_k e^{-t} (1 - e^{-(N-1)t})^k walked by recurrence.
  const int N = spec.n_children;
  const double q = -std::expm1(-(N - 1) * t);
  const double r = 1.0 / (N - 1);
  double zeta = std::exp(-t);
  double mass = 0.0;
  for (int k = 0; k <= truncation; ++k) {
    ev.value += zeta * q_rec(ctx, k, xi);
    mass += zeta;
    zeta *= (r + static_cast<double>(k)) / (static_cast<double>(k) + 1.0) * q;
  }
  ev.tail_bound = std::max(0.0, 1.0 - mass);
  return ev;
}

}  // namespace kacsim
