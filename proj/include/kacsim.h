/* kacsim C API: simulation and verification toolkit for one-dimensional
 * Kac-type kinetic equations with N-linear smoothing collision operators.
 *
 * All objects are opaque handles created/destroyed through this interface;
 * every call returns a ks_status, with a thread-local message available via
 * ks_last_error(). Strings returned through char** are heap-allocated and
 * must be released with ks_string_free().
 */
#ifndef KACSIM_H
#define KACSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KS_API __declspec(dllexport)
#else
#define KS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ks_status {
  KS_OK = 0,
  KS_ERR_CONFIG = 1,      /* malformed spec / bad arguments */
  KS_ERR_HYPOTHESIS = 2,  /* standing-hypothesis or classification failure */
  KS_ERR_NUMERIC = 3,     /* domain error, divergence, non-convergence */
  KS_ERR_UNSUPPORTED = 4, /* operation not defined for this input */
  KS_ERR_STATE = 5,       /* object not in a usable state */
  KS_ERR_IO = 6           /* file errors */
} ks_status;

typedef struct ks_kernel ks_kernel;   /* law of the weight vector A */
typedef struct ks_law ks_law;         /* initial law F_0 */
typedef struct ks_profile ks_profile; /* (H_gamma) classification */
typedef struct ks_batch ks_batch;     /* batch of real draws */
typedef struct ks_mixing ks_mixing;   /* mixing-law population */

KS_API const char* ks_version(void);
KS_API const char* ks_last_error(void);
KS_API void ks_string_free(char* s);

/* ---- kernel ------------------------------------------------------------ */

KS_API ks_status ks_kernel_from_json(const char* json, ks_kernel** out);
KS_API ks_status ks_kernel_preset(const char* name, ks_kernel** out);
KS_API ks_status ks_kernel_to_json(const ks_kernel* kernel, char** json_out);
KS_API void ks_kernel_free(ks_kernel* kernel);

/* Report of the three standing conditions; *passed is 1 when all hold.
 * report_json (optional) receives the per-condition details. */
KS_API ks_status ks_kernel_validate(const ks_kernel* kernel, int* passed, char** report_json);

KS_API ks_status ks_kernel_spectral(const ks_kernel* kernel, double s, double* S_out,
                                    double* mu_out);
KS_API ks_status ks_kernel_conjugate_exponent(const ks_kernel* kernel, double gamma,
                                              double s_max, double* q_star_out);
KS_API ks_status ks_kernel_exists_delta_above(const ks_kernel* kernel, double gamma,
                                              int* exists_out);
KS_API ks_status ks_kernel_is_conservative(const ks_kernel* kernel, double gamma, int* out);
KS_API ks_status ks_kernel_c_gamma(const ks_kernel* kernel, double gamma, double* out);

/* ---- initial law and stable attraction ---------------------------------- */

KS_API ks_status ks_law_from_json(const char* json, ks_law** out);
KS_API ks_status ks_law_to_json(const ks_law* law, char** json_out);
KS_API void ks_law_free(ks_law* law);

KS_API ks_status ks_law_classify(const ks_law* law, double gamma, ks_profile** out);
KS_API void ks_profile_free(ks_profile* profile);
/* case_out: 0 = H1a, 1 = H1b, 2 = H2, 3 = general gamma */
KS_API ks_status ks_profile_info(const ks_profile* profile, int* case_out, double* k0_out,
                                 double* eta0_out);
KS_API ks_status ks_profile_stable_cf(const ks_profile* profile, double xi, double* re_out,
                                      double* im_out);

/* ---- tree statistics ----------------------------------------------------- */

KS_API ks_status ks_tree_shape_probability(int n_children, const int64_t* sizes, int len,
                                           double* out);
/* product/Pochhammer/asymptotic forms of m_n(gamma) */
KS_API ks_status ks_tree_weight_norm(const ks_kernel* kernel, double gamma, int64_t n,
                                     double* value_out, double* asymptotic_out);
/* KS statistic of the first-subtree fraction against Beta(1/(N-1), 1) */
KS_API ks_status ks_tree_subtree_fraction_ks(uint64_t seed, int n_children, int64_t size,
                                             int64_t batch, int workers, double* ks_out);
/* Per-tree statistics written as CSV (size, M, M_tilde, beta_max, i_1..i_N);
 * mean_M_tilde_out receives the batch mean of M_tilde. */
KS_API ks_status ks_tree_stats_csv(const ks_kernel* kernel, double gamma, int64_t size,
                                   int64_t count, uint64_t seed, int workers, const char* path,
                                   double* mean_M_tilde_out);

/* ---- monte carlo --------------------------------------------------------- */

KS_API ks_status ks_sample_nu(uint64_t seed, double t, int n_children, int64_t count,
                              int64_t* values_out);
KS_API ks_status ks_gamma_clock_check(uint64_t seed, double t, int n_children, int64_t count,
                                      double* ks_out, int* scale_warning_out);

/* Batch of V_t draws; rescale_gamma < 0 disables the e^{-mu(gamma) t} rescale. */
KS_API ks_status ks_sample_batch(uint64_t seed, const ks_kernel* kernel, const ks_law* law,
                                 double t, int64_t count, double rescale_gamma, int workers,
                                 ks_batch** out);
KS_API ks_status ks_batch_values(const ks_batch* batch, const double** values_out,
                                 int64_t* count_out);
KS_API ks_status ks_batch_from_values(const double* values, int64_t count, ks_batch** out);
KS_API ks_status ks_batch_write_csv(const ks_batch* batch, const char* path);
KS_API ks_status ks_batch_read_csv(const char* path, ks_batch** out);
KS_API void ks_batch_free(ks_batch* batch);

/* ---- wild series ---------------------------------------------------------- */

KS_API ks_status ks_wild_solution(const ks_kernel* kernel, const ks_law* law, double t,
                                  double xi, int truncation, double* re_out, double* im_out,
                                  double* tail_bound_out);

/* ---- fixed point ----------------------------------------------------------- */

/* form: 0 = Theta-uniform update, 1 = Dirichlet-weight update */
KS_API ks_status ks_solve_mixing(uint64_t seed, const ks_kernel* kernel, double gamma,
                                 int64_t pop_size, int max_sweeps, double tol, int workers,
                                 int form, ks_mixing** out);
KS_API ks_status ks_mixing_population(const ks_mixing* mixing, const double** values_out,
                                      int64_t* count_out);
KS_API ks_status ks_mixing_info(const ks_mixing* mixing, int* converged_out, int* sweeps_out,
                                double* final_distance_out);
KS_API ks_status ks_mixing_moment(const ks_mixing* mixing, double p_over_gamma, double q_star,
                                  double* estimate_out, int* predicted_finite_out);
KS_API ks_status ks_mixing_write_csv(const ks_mixing* mixing, const char* path);
KS_API ks_status ks_mixing_read_csv(const char* path, ks_mixing** out);
KS_API void ks_mixing_free(ks_mixing* mixing);

KS_API ks_status ks_exact_second_moment(const ks_kernel* kernel, double gamma, double* out);

/* Batch of V_infinity draws from the solved mixing population. */
KS_API ks_status ks_sample_limit_batch(uint64_t seed, const ks_mixing* mixing,
                                       const ks_profile* profile, int64_t count, int workers,
                                       ks_batch** out);
/* CF of the limit law through the mixing population. */
KS_API ks_status ks_limit_cf(const ks_mixing* mixing, const ks_profile* profile, double xi,
                             double* re_out, double* im_out);

/* ---- metrics ----------------------------------------------------------------- */

KS_API ks_status ks_empirical_cf(const ks_batch* batch, const double* xi_grid, int len,
                                 double* re_out, double* im_out);
/* Named references: "std_normal", "cauchy:<scale>", "exp1", "gamma:<shape>",
 * "beta_sqrt" (CDF x^{1/2}), "beta:<a>" (CDF x^{a}). */
KS_API ks_status ks_ks_distance_ref(const ks_batch* batch, const char* reference,
                                    double* out);
KS_API ks_status ks_ks_distance_two_sample(const ks_batch* a, const ks_batch* b, double* out);
KS_API ks_status ks_wasserstein(const ks_batch* a, const ks_batch* b, double delta,
                                double* distance_out, double* cost_out, int* exact_out);
KS_API ks_status ks_fit_decay_rate(const double* t, const double* distance, int len,
                                   const ks_kernel* kernel, double gamma, double delta,
                                   double resolution_floor, double* slope_out,
                                   double* r_squared_out, double* predicted_out,
                                   int* used_points_out);
KS_API ks_status ks_zolotarev_bound_constant(const ks_batch* x0, const ks_batch* vinf,
                                             double delta, double* out);

#ifdef __cplusplus
}
#endif

#endif /* KACSIM_H */
