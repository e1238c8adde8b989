#include "kacsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "kacsim/errors.hpp"
#include "kacsim/numeric.hpp"
#include "kacsim/trees.hpp"

namespace kacsim {

namespace {

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

template <class Fn>
void run_workers(std::int64_t count, int workers, Fn&& fn) {
  // fn(worker_index, begin, end) over a block partition of [0, count).
  const int n = std::min<std::int64_t>(resolve_workers(workers), std::max<std::int64_t>(1, count));
  if (n <= 1) {
    fn(0, std::int64_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  const std::int64_t chunk = (count + n - 1) / n;
  for (int w = 0; w < n; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min<std::int64_t>(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

// ---------------------------------------------------------------------------
// nu_t sampling
// ---------------------------------------------------------------------------

NuSampler::NuSampler(double t, int n_children) : t_(t), n_children_(n_children) {
  if (t < 0.0) throw NumericError("sample_nu: t must be >= 0");
  if (n_children < 2) throw NumericError("sample_nu: n_children must be >= 2");
  // zeta(t,0) = e^{-t}; successive terms via
  //   zeta(t,k+1) = zeta(t,k) * (1/(N-1) + k)/(k+1) * (1 - e^{-(N-1)t}).
  const double q = -std::expm1(-(n_children - 1) * t);  // 1 - e^{-(N-1)t}
  tail_factor_ = q;
  last_term_ = std::exp(-t);
  cumulative_.push_back(last_term_);
}

void NuSampler::extend() {
  const double r = 1.0 / (n_children_ - 1);
  const std::size_t k = cumulative_.size() - 1;
  last_term_ *= (r + static_cast<double>(k)) / (static_cast<double>(k) + 1.0) * tail_factor_;
  cumulative_.push_back(cumulative_.back() + last_term_);
}

std::int64_t NuSampler::operator()(CounterRng& rng) {
  const double u = rng.u01();
  // Binary search the cached CDF, extending until it covers u.
  while (cumulative_.back() < u) {
    if (1.0 - cumulative_.back() < 1e-15 || cumulative_.size() > (1u << 28)) break;
    extend();
  }
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return static_cast<std::int64_t>(cumulative_.size()) - 1;
  return static_cast<std::int64_t>(it - cumulative_.begin());
}

double NuSampler::mean() const {
  return std::expm1((n_children_ - 1) * t_) / (n_children_ - 1);
}

std::int64_t sample_nu(CounterRng& rng, double t, int n_children) {
  NuSampler sampler(t, n_children);
  return sampler(rng);
}

// ---------------------------------------------------------------------------
// Solution sampling
// ---------------------------------------------------------------------------

namespace {

void check_cost(double t, int n_children, double cap) {
  const double expected = std::expm1((n_children - 1) * t) / (n_children - 1);
  if (expected > cap)
    throw NumericError("sample_solution: expected tree size " + std::to_string(expected) +
                       " exceeds the cost cap " + std::to_string(cap) +
                       "; lower t or raise the cap");
}

double draw_solution(CounterRng& rng, const KernelSpec& spec, const InitialLaw& law,
                     NuSampler& nu, double rescale_factor, detail::TreeBuffers& buf) {
  const std::int64_t k = nu(rng);
  detail::grow_into(rng, spec, k, buf);
  double w = 0.0;
  for (double beta : buf.weights) w += beta * sample_initial(rng, law);
  return rescale_factor * w;
}

}  // namespace

double sample_solution(CounterRng& rng, const KernelSpec& spec, const InitialLaw& law,
                       double t, const SolutionOptions& opts) {
  check_cost(t, spec.n_children, opts.expected_nodes_cap);
  double factor = 1.0;
  if (opts.rescale_gamma) {
    const double mu = spectral_mu(spec, *opts.rescale_gamma);
    if (!std::isfinite(mu)) throw NumericError("sample_solution: S(gamma) is infinite");
    factor = std::exp(-mu * t);
  }
  NuSampler nu(t, spec.n_children);
  detail::TreeBuffers buf;
  return draw_solution(rng, spec, law, nu, factor, buf);
}

SampleBatch sample_batch(std::uint64_t seed, const KernelSpec& spec, const InitialLaw& law,
                         double t, std::int64_t count, const BatchOptions& opts) {
  if (count < 1) throw NumericError("sample_batch: count must be >= 1");
  check_cost(t, spec.n_children, opts.expected_nodes_cap);
  double factor = 1.0;
  if (opts.rescale_gamma) {
    const double mu = spectral_mu(spec, *opts.rescale_gamma);
    if (!std::isfinite(mu)) throw NumericError("sample_batch: S(gamma) is infinite");
    factor = std::exp(-mu * t);
  }

  SampleBatch batch;
  batch.values.resize(count);
  batch.t = t;
  batch.rescale_gamma = opts.rescale_gamma;
  batch.seed = seed;
  batch.kernel_label = spec.label;
  batch.law_label = law.label;

  run_workers(count, opts.workers, [&](int, std::int64_t begin, std::int64_t end) {
    NuSampler nu(t, spec.n_children);
    detail::TreeBuffers buf;
    for (std::int64_t i = begin; i < end; ++i) {
      CounterRng rng(seed, static_cast<std::uint64_t>(i));
      batch.values[i] = draw_solution(rng, spec, law, nu, factor, buf);
    }
  });
  return batch;
}

// ---------------------------------------------------------------------------
// Limit variable
// ---------------------------------------------------------------------------

double sample_limit(CounterRng& rng, const MixingLaw& mixing, const HGammaProfile& profile) {
  if (mixing.population.empty()) throw StateError("sample_limit: empty mixing population");
  const double y = mixing.population[rng.uniform_below(mixing.population.size())];
  if (profile.h_case == HGammaCase::H1a) return profile.m0 * y;
  return std::pow(y, 1.0 / profile.gamma) * sample_stable(rng, profile);
}

SampleBatch sample_limit_batch(std::uint64_t seed, const MixingLaw& mixing,
                               const HGammaProfile& profile, std::int64_t count, int workers) {
  if (count < 1) throw NumericError("sample_limit_batch: count must be >= 1");
  SampleBatch batch;
  batch.values.resize(count);
  batch.t_is_infinity = true;
  batch.rescale_gamma = profile.gamma;
  batch.seed = seed;
  batch.kernel_label = mixing.kernel_label;
  const std::uint64_t base = mix_seed(seed, 0x4c494d4954ull /*'LIMIT'*/);
  run_workers(count, workers, [&](int, std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      CounterRng rng(base, static_cast<std::uint64_t>(i));
      batch.values[i] = sample_limit(rng, mixing, profile);
    }
  });
  return batch;
}

std::complex<double> limit_cf(const MixingLaw& mixing, const HGammaProfile& profile, double xi) {
  if (mixing.population.empty()) throw StateError("limit_cf: empty mixing population");
  std::complex<double> acc{0.0, 0.0};
  if (profile.h_case == HGammaCase::H1a) {
    for (double y : mixing.population) {
      const double phase = xi * profile.m0 * y;
      acc += std::complex<double>(std::cos(phase), std::sin(phase));
    }
  } else {
    for (double y : mixing.population)
      acc += stable_cf(profile, xi * std::pow(y, 1.0 / profile.gamma));
  }
  return acc / static_cast<double>(mixing.population.size());
}

// ---------------------------------------------------------------------------
// Clock limit
// ---------------------------------------------------------------------------

ClockCheck gamma_clock_check(std::uint64_t seed, double t, int n_children, std::int64_t count,
                             const KernelSpec* spec, double gamma) {
  if (count < 1) throw NumericError("gamma_clock_check: count must be >= 1");
  ClockCheck out;
  const double scale = std::exp(-(n_children - 1) * t);
  out.scale_warning = scale >= 0.05;

  std::vector<double> values(count);
  const std::uint64_t base = mix_seed(seed, 0x434c4f434bull /*'CLOCK'*/);
  run_workers(count, 0, [&](int, std::int64_t begin, std::int64_t end) {
    NuSampler nu(t, n_children);
    for (std::int64_t i = begin; i < end; ++i) {
      CounterRng rng(base, static_cast<std::uint64_t>(i));
      values[i] = static_cast<double>(nu(rng)) * scale;
    }
  });
  std::sort(values.begin(), values.end());

  const double shape = 1.0 / (n_children - 1);
  const double n = static_cast<double>(count);
  double ks = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    const double F = gamma_cdf(shape, values[i]);
    ks = std::max(ks, std::max(F - static_cast<double>(i) / n,
                               static_cast<double>(i + 1) / n - F));
  }
  out.ks = ks;
  if (spec != nullptr) out.c_gamma = c_gamma(*spec, gamma);
  return out;
}

}  // namespace kacsim
