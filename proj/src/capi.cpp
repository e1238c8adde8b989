#include "kacsim.h"

#include <cmath>
#include <complex>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "kacsim/errors.hpp"
#include "kacsim/fixedpoint.hpp"
#include "kacsim/initial_data.hpp"
#include "kacsim/io.hpp"
#include "kacsim/kernel.hpp"
#include "kacsim/metrics.hpp"
#include "kacsim/montecarlo.hpp"
#include "kacsim/numeric.hpp"
#include "kacsim/trees.hpp"
#include "kacsim/wild.hpp"

using namespace kacsim;

struct ks_kernel {
  KernelSpec spec;
};
struct ks_law {
  InitialLaw law;
};
struct ks_profile {
  HGammaProfile profile;
};
struct ks_batch {
  SampleBatch batch;
};
struct ks_mixing {
  MixingLaw mixing;
};

namespace {

thread_local std::string g_last_error;

ks_status set_error(ks_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Translates C++ exceptions into status codes at the API boundary.
template <class Fn>
ks_status guarded(Fn&& fn) {
  try {
    fn();
    return KS_OK;
  } catch (const ConfigError& e) {
    return set_error(KS_ERR_CONFIG, e.what());
  } catch (const HypothesisError& e) {
    return set_error(KS_ERR_HYPOTHESIS, e.what());
  } catch (const NumericError& e) {
    return set_error(KS_ERR_NUMERIC, e.what());
  } catch (const UnsupportedError& e) {
    return set_error(KS_ERR_UNSUPPORTED, e.what());
  } catch (const StateError& e) {
    return set_error(KS_ERR_STATE, e.what());
  } catch (const std::exception& e) {
    return set_error(KS_ERR_NUMERIC, e.what());
  }
}

ks_status require_nonnull(const void* p, const char* name) {
  if (p != nullptr) return KS_OK;
  g_last_error = std::string(name) + " must not be null";
  return KS_ERR_CONFIG;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* ks_version(void) { return library_version(); }

const char* ks_last_error(void) { return g_last_error.c_str(); }

void ks_string_free(char* s) { delete[] s; }

/* ---- kernel ------------------------------------------------------------ */

ks_status ks_kernel_from_json(const char* json, ks_kernel** out) {
  if (ks_status st = require_nonnull(json, "json"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = new ks_kernel{kernel_from_json(json)}; });
}

ks_status ks_kernel_preset(const char* name, ks_kernel** out) {
  if (ks_status st = require_nonnull(name, "name"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = new ks_kernel{KernelSpec::preset(name)}; });
}

ks_status ks_kernel_to_json(const ks_kernel* kernel, char** json_out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(json_out, "json_out"); st != KS_OK) return st;
  return guarded([&] { *json_out = dup_string(kernel_to_json(kernel->spec)); });
}

void ks_kernel_free(ks_kernel* kernel) { delete kernel; }

ks_status ks_kernel_validate(const ks_kernel* kernel, int* passed, char** report_json) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(passed, "passed"); st != KS_OK) return st;
  return guarded([&] {
    const ValidationReport report = validate_kernel(kernel->spec);
    *passed = report.passed ? 1 : 0;
    if (report_json != nullptr) *report_json = dup_string(validation_report_to_json(report));
  });
}

ks_status ks_kernel_spectral(const ks_kernel* kernel, double s, double* S_out, double* mu_out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  return guarded([&] {
    const SpectralProfile p = spectral(kernel->spec, s);
    if (S_out != nullptr) *S_out = p.S;
    if (mu_out != nullptr) *mu_out = p.mu;
  });
}

ks_status ks_kernel_conjugate_exponent(const ks_kernel* kernel, double gamma, double s_max,
                                       double* q_star_out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(q_star_out, "q_star_out"); st != KS_OK) return st;
  return guarded([&] {
    ConjugateOptions opts;
    if (s_max > 0.0) opts.s_max = s_max;
    *q_star_out = conjugate_exponent(kernel->spec, gamma, opts);
  });
}

ks_status ks_kernel_exists_delta_above(const ks_kernel* kernel, double gamma, int* exists_out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(exists_out, "exists_out"); st != KS_OK) return st;
  return guarded([&] { *exists_out = exists_delta_above(kernel->spec, gamma) ? 1 : 0; });
}

ks_status ks_kernel_is_conservative(const ks_kernel* kernel, double gamma, int* out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = kernel->spec.is_conservative(gamma) ? 1 : 0; });
}

ks_status ks_kernel_c_gamma(const ks_kernel* kernel, double gamma, double* out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = c_gamma(kernel->spec, gamma); });
}

/* ---- initial law --------------------------------------------------------- */

ks_status ks_law_from_json(const char* json, ks_law** out) {
  if (ks_status st = require_nonnull(json, "json"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = new ks_law{law_from_json(json)}; });
}

ks_status ks_law_to_json(const ks_law* law, char** json_out) {
  if (ks_status st = require_nonnull(law, "law"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(json_out, "json_out"); st != KS_OK) return st;
  return guarded([&] { *json_out = dup_string(law_to_json(law->law)); });
}

void ks_law_free(ks_law* law) { delete law; }

ks_status ks_law_classify(const ks_law* law, double gamma, ks_profile** out) {
  if (ks_status st = require_nonnull(law, "law"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = new ks_profile{classify(law->law, gamma)}; });
}

void ks_profile_free(ks_profile* profile) { delete profile; }

ks_status ks_profile_info(const ks_profile* profile, int* case_out, double* k0_out,
                          double* eta0_out) {
  if (ks_status st = require_nonnull(profile, "profile"); st != KS_OK) return st;
  return guarded([&] {
    if (case_out != nullptr) *case_out = static_cast<int>(profile->profile.h_case);
    if (k0_out != nullptr) *k0_out = profile->profile.k0;
    if (eta0_out != nullptr) *eta0_out = profile->profile.eta0;
  });
}

ks_status ks_profile_stable_cf(const ks_profile* profile, double xi, double* re_out,
                               double* im_out) {
  if (ks_status st = require_nonnull(profile, "profile"); st != KS_OK) return st;
  return guarded([&] {
    const std::complex<double> v = stable_cf(profile->profile, xi);
    if (re_out != nullptr) *re_out = v.real();
    if (im_out != nullptr) *im_out = v.imag();
  });
}

/* ---- trees ----------------------------------------------------------------- */

ks_status ks_tree_shape_probability(int n_children, const int64_t* sizes, int len, double* out) {
  if (ks_status st = require_nonnull(sizes, "sizes"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] {
    std::vector<std::int64_t> v(sizes, sizes + len);
    *out = shape_probability(n_children, v);
  });
}

ks_status ks_tree_weight_norm(const ks_kernel* kernel, double gamma, int64_t n,
                              double* value_out, double* asymptotic_out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  return guarded([&] {
    const WeightNorm wn = expected_weight_norm(kernel->spec, gamma, n);
    if (value_out != nullptr) *value_out = wn.value;
    if (asymptotic_out != nullptr) *asymptotic_out = wn.asymptotic_form;
  });
}

ks_status ks_tree_subtree_fraction_ks(uint64_t seed, int n_children, int64_t size, int64_t batch,
                                      int workers, double* ks_out) {
  if (ks_status st = require_nonnull(ks_out, "ks_out"); st != KS_OK) return st;
  return guarded([&] {
    const std::vector<double> fr =
        subtree_fraction_sample(seed, n_children, size, batch, workers);
    SampleBatch first;
    first.values.reserve(batch);
    for (std::int64_t i = 0; i < batch; ++i)
      first.values.push_back(fr[static_cast<std::size_t>(i) * n_children]);
    const double a = 1.0 / (n_children - 1);
    *ks_out = ks_distance(first, [a](double x) {
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return std::pow(x, a);
    });
  });
}

ks_status ks_tree_stats_csv(const ks_kernel* kernel, double gamma, int64_t size, int64_t count,
                            uint64_t seed, int workers, const char* path,
                            double* mean_M_tilde_out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(path, "path"); st != KS_OK) return st;
  return guarded([&] {
    const std::vector<TreeStatsRow> rows =
        tree_stats_batch(seed, kernel->spec, gamma, size, count, workers);
    write_tree_stats_csv(path, rows, kernel->spec.n_children);
    if (mean_M_tilde_out != nullptr) {
      double acc = 0.0;
      for (const TreeStatsRow& row : rows) acc += row.M_tilde;
      *mean_M_tilde_out = acc / static_cast<double>(rows.size());
    }
  });
}

/* ---- monte carlo ------------------------------------------------------------ */

ks_status ks_sample_nu(uint64_t seed, double t, int n_children, int64_t count,
                       int64_t* values_out) {
  if (ks_status st = require_nonnull(values_out, "values_out"); st != KS_OK) return st;
  return guarded([&] {
    NuSampler nu(t, n_children);
    const std::uint64_t base = mix_seed(seed, 0x4e55ull /*'NU'*/);
    for (std::int64_t i = 0; i < count; ++i) {
      CounterRng rng(base, static_cast<std::uint64_t>(i));
      values_out[i] = nu(rng);
    }
  });
}

ks_status ks_gamma_clock_check(uint64_t seed, double t, int n_children, int64_t count,
                               double* ks_out, int* scale_warning_out) {
  if (ks_status st = require_nonnull(ks_out, "ks_out"); st != KS_OK) return st;
  return guarded([&] {
    const ClockCheck check = gamma_clock_check(seed, t, n_children, count);
    *ks_out = check.ks;
    if (scale_warning_out != nullptr) *scale_warning_out = check.scale_warning ? 1 : 0;
  });
}

ks_status ks_sample_batch(uint64_t seed, const ks_kernel* kernel, const ks_law* law, double t,
                          int64_t count, double rescale_gamma, int workers, ks_batch** out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(law, "law"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] {
    BatchOptions opts;
    if (rescale_gamma >= 0.0) opts.rescale_gamma = rescale_gamma;
    opts.workers = workers;
    *out = new ks_batch{sample_batch(seed, kernel->spec, law->law, t, count, opts)};
  });
}

ks_status ks_batch_values(const ks_batch* batch, const double** values_out, int64_t* count_out) {
  if (ks_status st = require_nonnull(batch, "batch"); st != KS_OK) return st;
  return guarded([&] {
    if (values_out != nullptr) *values_out = batch->batch.values.data();
    if (count_out != nullptr) *count_out = static_cast<int64_t>(batch->batch.values.size());
  });
}

ks_status ks_batch_from_values(const double* values, int64_t count, ks_batch** out) {
  if (ks_status st = require_nonnull(values, "values"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] {
    SampleBatch b;
    b.values.assign(values, values + count);
    *out = new ks_batch{std::move(b)};
  });
}

ks_status ks_batch_write_csv(const ks_batch* batch, const char* path) {
  if (ks_status st = require_nonnull(batch, "batch"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(path, "path"); st != KS_OK) return st;
  return guarded([&] { write_batch_csv(path, batch->batch); });
}

ks_status ks_batch_read_csv(const char* path, ks_batch** out) {
  if (ks_status st = require_nonnull(path, "path"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = new ks_batch{read_batch_csv(path)}; });
}

void ks_batch_free(ks_batch* batch) { delete batch; }

/* ---- wild ---------------------------------------------------------------------- */

ks_status ks_wild_solution(const ks_kernel* kernel, const ks_law* law, double t, double xi,
                           int truncation, double* re_out, double* im_out,
                           double* tail_bound_out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(law, "law"); st != KS_OK) return st;
  return guarded([&] {
    const WildEvaluation ev = wild_solution(kernel->spec, law->law, t, xi, truncation);
    if (re_out != nullptr) *re_out = ev.value.real();
    if (im_out != nullptr) *im_out = ev.value.imag();
    if (tail_bound_out != nullptr) *tail_bound_out = ev.tail_bound;
  });
}

/* ---- fixed point --------------------------------------------------------------- */

ks_status ks_solve_mixing(uint64_t seed, const ks_kernel* kernel, double gamma, int64_t pop_size,
                          int max_sweeps, double tol, int workers, int form, ks_mixing** out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] {
    MixingOptions opts;
    if (pop_size > 0) opts.pop_size = pop_size;
    if (max_sweeps > 0) opts.max_sweeps = max_sweeps;
    if (tol > 0.0) opts.tol = tol;
    opts.workers = workers;
    opts.form = form == 1 ? UpdateForm::DirichletWeights : UpdateForm::ThetaUniform;
    *out = new ks_mixing{solve_mixing(seed, kernel->spec, gamma, opts)};
  });
}

ks_status ks_mixing_population(const ks_mixing* mixing, const double** values_out,
                               int64_t* count_out) {
  if (ks_status st = require_nonnull(mixing, "mixing"); st != KS_OK) return st;
  return guarded([&] {
    if (values_out != nullptr) *values_out = mixing->mixing.population.data();
    if (count_out != nullptr) *count_out = static_cast<int64_t>(mixing->mixing.population.size());
  });
}

ks_status ks_mixing_info(const ks_mixing* mixing, int* converged_out, int* sweeps_out,
                         double* final_distance_out) {
  if (ks_status st = require_nonnull(mixing, "mixing"); st != KS_OK) return st;
  return guarded([&] {
    if (converged_out != nullptr) *converged_out = mixing->mixing.converged ? 1 : 0;
    if (sweeps_out != nullptr) *sweeps_out = mixing->mixing.sweeps_run;
    if (final_distance_out != nullptr) *final_distance_out = mixing->mixing.final_update_distance;
  });
}

ks_status ks_mixing_moment(const ks_mixing* mixing, double p_over_gamma, double q_star,
                           double* estimate_out, int* predicted_finite_out) {
  if (ks_status st = require_nonnull(mixing, "mixing"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(estimate_out, "estimate_out"); st != KS_OK) return st;
  return guarded([&] {
    const MomentEstimate est = mixing_moment(mixing->mixing, p_over_gamma, q_star);
    *estimate_out = est.estimate;
    if (predicted_finite_out != nullptr) *predicted_finite_out = est.predicted_finite ? 1 : 0;
  });
}

ks_status ks_mixing_write_csv(const ks_mixing* mixing, const char* path) {
  if (ks_status st = require_nonnull(mixing, "mixing"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(path, "path"); st != KS_OK) return st;
  return guarded([&] { write_mixing_csv(path, mixing->mixing); });
}

ks_status ks_mixing_read_csv(const char* path, ks_mixing** out) {
  if (ks_status st = require_nonnull(path, "path"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = new ks_mixing{read_mixing_csv(path)}; });
}

void ks_mixing_free(ks_mixing* mixing) { delete mixing; }

ks_status ks_exact_second_moment(const ks_kernel* kernel, double gamma, double* out) {
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = exact_second_moment(kernel->spec, gamma); });
}

ks_status ks_sample_limit_batch(uint64_t seed, const ks_mixing* mixing, const ks_profile* profile,
                                int64_t count, int workers, ks_batch** out) {
  if (ks_status st = require_nonnull(mixing, "mixing"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(profile, "profile"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] {
    *out = new ks_batch{
        sample_limit_batch(seed, mixing->mixing, profile->profile, count, workers)};
  });
}

ks_status ks_limit_cf(const ks_mixing* mixing, const ks_profile* profile, double xi,
                      double* re_out, double* im_out) {
  if (ks_status st = require_nonnull(mixing, "mixing"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(profile, "profile"); st != KS_OK) return st;
  return guarded([&] {
    const std::complex<double> v = limit_cf(mixing->mixing, profile->profile, xi);
    if (re_out != nullptr) *re_out = v.real();
    if (im_out != nullptr) *im_out = v.imag();
  });
}

/* ---- metrics --------------------------------------------------------------------- */

ks_status ks_empirical_cf(const ks_batch* batch, const double* xi_grid, int len, double* re_out,
                          double* im_out) {
  if (ks_status st = require_nonnull(batch, "batch"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(xi_grid, "xi_grid"); st != KS_OK) return st;
  return guarded([&] {
    const std::vector<double> grid(xi_grid, xi_grid + len);
    const auto values = empirical_cf(batch->batch, grid);
    for (int i = 0; i < len; ++i) {
      if (re_out != nullptr) re_out[i] = values[i].real();
      if (im_out != nullptr) im_out[i] = values[i].imag();
    }
  });
}

ks_status ks_ks_distance_ref(const ks_batch* batch, const char* reference, double* out) {
  if (ks_status st = require_nonnull(batch, "batch"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(reference, "reference"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] {
    const std::string ref = reference;
    std::function<double(double)> cdf;
    if (ref == "std_normal") {
      cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    } else if (ref.rfind("cauchy:", 0) == 0) {
      const double scale = std::stod(ref.substr(7));
      cdf = [scale](double x) { return 0.5 + std::atan(x / scale) / M_PI; };
    } else if (ref == "exp1") {
      cdf = [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); };
    } else if (ref.rfind("gamma:", 0) == 0) {
      const double shape = std::stod(ref.substr(6));
      cdf = [shape](double x) { return gamma_cdf(shape, x); };
    } else if (ref == "beta_sqrt") {
      cdf = [](double x) { return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : std::sqrt(x)); };
    } else if (ref.rfind("beta:", 0) == 0) {
      const double a = std::stod(ref.substr(5));
      cdf = [a](double x) { return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : std::pow(x, a)); };
    } else {
      throw ConfigError("unknown reference distribution: " + ref);
    }
    *out = ks_distance(batch->batch, cdf);
  });
}

ks_status ks_ks_distance_two_sample(const ks_batch* a, const ks_batch* b, double* out) {
  if (ks_status st = require_nonnull(a, "a"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(b, "b"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = ks_distance_two_sample(a->batch, b->batch); });
}

ks_status ks_wasserstein(const ks_batch* a, const ks_batch* b, double delta, double* distance_out,
                         double* cost_out, int* exact_out) {
  if (ks_status st = require_nonnull(a, "a"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(b, "b"); st != KS_OK) return st;
  return guarded([&] {
    const double cost = wasserstein_cost(a->batch, b->batch, delta);
    if (cost_out != nullptr) *cost_out = cost;
    if (distance_out != nullptr) *distance_out = std::pow(cost, 1.0 / std::max(delta, 1.0));
    if (exact_out != nullptr) *exact_out = wasserstein_is_exact(delta) ? 1 : 0;
  });
}

ks_status ks_fit_decay_rate(const double* t, const double* distance, int len,
                            const ks_kernel* kernel, double gamma, double delta,
                            double resolution_floor, double* slope_out, double* r_squared_out,
                            double* predicted_out, int* used_points_out) {
  if (ks_status st = require_nonnull(t, "t"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(distance, "distance"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(kernel, "kernel"); st != KS_OK) return st;
  return guarded([&] {
    std::vector<RatePoint> points(len);
    for (int i = 0; i < len; ++i) points[i] = {t[i], distance[i]};
    const RateFit fit = fit_decay_rate(points, kernel->spec, gamma, delta, resolution_floor);
    if (slope_out != nullptr) *slope_out = fit.slope;
    if (r_squared_out != nullptr) *r_squared_out = fit.r_squared;
    if (predicted_out != nullptr) *predicted_out = fit.predicted_slope;
    if (used_points_out != nullptr) *used_points_out = static_cast<int>(fit.points.size());
  });
}

ks_status ks_zolotarev_bound_constant(const ks_batch* x0, const ks_batch* vinf, double delta,
                                      double* out) {
  if (ks_status st = require_nonnull(x0, "x0"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(vinf, "vinf"); st != KS_OK) return st;
  if (ks_status st = require_nonnull(out, "out"); st != KS_OK) return st;
  return guarded([&] { *out = zolotarev_bound_constant(x0->batch, vinf->batch, delta); });
}

}  // extern "C"
