#include "kacsim/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "kacsim/errors.hpp"
#include "kacsim/numeric.hpp"
#include "kacsim/rng.hpp"
#include "kacsim/trees.hpp"

namespace kacsim {

namespace {

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

double sorted_w1(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

struct SweepContext {
  const KernelSpec& spec;
  double gamma;
  double S_gamma;
  int n_children;
  UpdateForm form;
  double dirichlet_shape;     // 1/(N-1)
  double dirichlet_exponent;  // S(gamma)/(N-1)
};

// One new population entry from the previous generation (read-only).
double update_entry(CounterRng& rng, const SweepContext& ctx, const std::vector<double>& prev) {
  double a_pow[64];
  ctx.spec.sample_weights_pow(rng, ctx.gamma, std::span<double>(a_pow, ctx.n_children));
  const std::size_t P = prev.size();
  if (ctx.form == UpdateForm::ThetaUniform) {
    // Y' = Theta^{S(gamma)} sum_i A_i^gamma Y_{k_i}
    const double theta = ctx.S_gamma == 0.0 ? 1.0 : std::pow(rng.u01_open(), ctx.S_gamma);
    double acc = 0.0;
    for (int i = 0; i < ctx.n_children; ++i) acc += a_pow[i] * prev[rng.uniform_below(P)];
    return theta * acc;
  }
  // Dirichlet form: M' = sum_i A_i^gamma U_i^{S(gamma)/(N-1)} M_{k_i},
  // U ~ Dirichlet(1/(N-1), ..., 1/(N-1)) via normalized Gammas.
  double g[64];
  double gsum = 0.0;
  for (int i = 0; i < ctx.n_children; ++i) {
    g[i] = rng.gamma(ctx.dirichlet_shape);
    gsum += g[i];
  }
  double acc = 0.0;
  for (int i = 0; i < ctx.n_children; ++i) {
    const double u = g[i] / gsum;
    const double w = ctx.dirichlet_exponent == 0.0 ? 1.0 : std::pow(u, ctx.dirichlet_exponent);
    acc += a_pow[i] * w * prev[rng.uniform_below(P)];
  }
  return acc;
}

void run_sweep(const SweepContext& ctx, std::uint64_t seed, std::uint64_t sweep_index,
               const std::vector<double>& prev, std::vector<double>& next, int workers) {
  const std::int64_t P = static_cast<std::int64_t>(prev.size());
  const int n = std::min<std::int64_t>(resolve_workers(workers), P);
  auto work = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      CounterRng rng(seed, sweep_index * static_cast<std::uint64_t>(P) + i);
      next[i] = update_entry(rng, ctx, prev);
    }
  };
  if (n <= 1) {
    work(0, P);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (P + n - 1) / n;
    for (int w = 0; w < n; ++w) {
      const std::int64_t begin = w * chunk;
      const std::int64_t end = std::min(P, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  double mean = 0.0;
  for (double v : next) mean += v;
  mean /= static_cast<double>(P);
  if (!(mean > 0.0))
    throw NumericError("solve_mixing: population mean collapsed to zero (degenerate kernel input)");
  for (double& v : next) v /= mean;
}

}  // namespace

MixingLaw solve_mixing(std::uint64_t seed, const KernelSpec& spec, double gamma,
                       const MixingOptions& opts) {
  if (opts.pop_size < 2) throw NumericError("solve_mixing: pop_size must be >= 2");
  const double S = spectral_S(spec, gamma);
  if (!std::isfinite(S)) throw NumericError("solve_mixing: S(gamma) is infinite");
  if (S <= -1.0 + 1e-15)
    throw NumericError("solve_mixing: sum A_i^gamma vanishes almost surely");

  SweepContext ctx{spec, gamma, S, spec.n_children, opts.form,
                   1.0 / (spec.n_children - 1), S / (spec.n_children - 1)};

  MixingLaw law;
  law.gamma = gamma;
  law.kernel_label = spec.label;
  law.population.resize(opts.pop_size);

  // Mean-one nonnegative start: i.i.d. Exp(1).
  const std::uint64_t init_seed = mix_seed(seed, 0x494e4954ull /*'INIT'*/);
  for (std::int64_t i = 0; i < opts.pop_size; ++i) {
    CounterRng rng(init_seed, static_cast<std::uint64_t>(i));
    law.population[i] = rng.exponential();
  }
  {
    double mean = 0.0;
    for (double v : law.population) mean += v;
    mean /= static_cast<double>(opts.pop_size);
    for (double& v : law.population) v /= mean;
  }

  const std::uint64_t sweep_seed = mix_seed(seed, 0x5357454550ull /*'SWEEP'*/);
  std::vector<double> next(opts.pop_size);
  std::vector<double> prev_sorted = law.population;
  std::sort(prev_sorted.begin(), prev_sorted.end());
  std::vector<double> cur_sorted(opts.pop_size);

  law.final_update_distance = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    run_sweep(ctx, sweep_seed, static_cast<std::uint64_t>(sweep), law.population, next,
              opts.workers);
    law.population.swap(next);
    law.sweeps_run = sweep + 1;
    cur_sorted = law.population;
    std::sort(cur_sorted.begin(), cur_sorted.end());
    law.final_update_distance = sorted_w1(prev_sorted, cur_sorted);
    prev_sorted.swap(cur_sorted);
    if (law.final_update_distance < opts.tol) {
      law.converged = true;
      break;
    }
  }
  return law;
}

double resample_distance(std::uint64_t seed, const MixingLaw& mixing, const KernelSpec& spec,
                         const MixingOptions& opts) {
  const double S = spectral_S(spec, mixing.gamma);
  SweepContext ctx{spec, mixing.gamma, S, spec.n_children, opts.form,
                   1.0 / (spec.n_children - 1), S / (spec.n_children - 1)};
  std::vector<double> next(mixing.population.size());
  run_sweep(ctx, mix_seed(seed, 0x434845434bull /*'CHECK'*/), 0, mixing.population, next,
            opts.workers);
  std::vector<double> a = mixing.population;
  std::sort(a.begin(), a.end());
  std::sort(next.begin(), next.end());
  return sorted_w1(a, next);
}

double exact_second_moment(const KernelSpec& spec, double gamma) {
  const WeightMoments wm = weight_moments(spec, gamma);
  const double S = wm.s1 - 1.0;
  if (!std::isfinite(wm.s2)) throw NumericError("exact_second_moment: S(2 gamma) unavailable");
  const double denom = 2.0 * S + 1.0 - wm.s2;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return wm.cross / denom;
}

MomentEstimate mixing_moment(const MixingLaw& mixing, double p_over_gamma, double q_star) {
  if (mixing.population.empty()) throw StateError("mixing_moment: empty population");
  MomentEstimate out;
  const double p = p_over_gamma * mixing.gamma;
  out.predicted_finite = p < q_star;

  auto moment_of_prefix = [&](std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::pow(mixing.population[i], p_over_gamma);
    return acc / static_cast<double>(n);
  };
  const std::size_t P = mixing.population.size();
  out.estimate = moment_of_prefix(P);
  if (!out.predicted_finite)
    out.growth = {moment_of_prefix(P / 4), moment_of_prefix(P / 2), out.estimate};
  return out;
}

}  // namespace kacsim
