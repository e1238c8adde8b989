#ifndef KACSIM_METRICS_HPP
#define KACSIM_METRICS_HPP

#include <complex>
#include <functional>
#include <vector>

#include "kacsim/kernel.hpp"
#include "kacsim/montecarlo.hpp"

namespace kacsim {

// (1/n) sum exp(i xi x) over the batch, per grid point.
std::vector<std::complex<double>> empirical_cf(const SampleBatch& batch,
                                               const std::vector<double>& xi_grid);

// Sup distance between the empirical CDF and a monotone reference CDF,
// evaluated at the sorted sample points.
double ks_distance(const SampleBatch& batch, const std::function<double(double)>& reference_cdf);

// Two-sample KS statistic.
double ks_distance_two_sample(const SampleBatch& a, const SampleBatch& b);

// Quantile-coupling Wasserstein estimate:
//   ((1/n) sum |x_(i) - y_(i)|^delta)^{1/max(delta,1)}.
// Exact W_delta on the line for delta >= 1; an upper-bound estimator for
// delta < 1 (see wasserstein_is_exact). Unequal sizes pair the smaller batch
// against interpolated quantiles of the larger.
double wasserstein_distance(const SampleBatch& a, const SampleBatch& b, double delta);
constexpr bool wasserstein_is_exact(double delta) { return delta >= 1.0; }

// The raw coupling cost (1/n) sum |x_(i) - y_(i)|^delta = W_delta^{max(delta,1)},
// the quantity whose exponential decay the rate experiments fit.
double wasserstein_cost(const SampleBatch& a, const SampleBatch& b, double delta);

struct RatePoint {
  double t = 0.0;
  double distance = 0.0;
};

struct RateFit {
  std::vector<RatePoint> points;   // the points actually used by the fit
  double slope = 0.0;              // decay exponent of distance ~ C e^{-slope t}
  double r_squared = 0.0;
  double predicted_slope = 0.0;    // delta (mu(gamma) - mu(delta)), the bound exponent
  double resolution_floor = 0.0;
  int excluded_points = 0;
};

// Least-squares fit of log(distance) against t. Points at or below the
// resolution floor are excluded; fewer than 3 usable points is an error.
// The bound gives an upper envelope, so acceptance contracts are one-sided
// (fitted slope >= predicted - tolerance).
RateFit fit_decay_rate(const std::vector<RatePoint>& points, const KernelSpec& spec,
                       double gamma, double delta, double resolution_floor = 0.0);

// (E|X_0|^delta + E|V_inf|^delta) / Gamma(1 + delta), delta <= 3.
double zolotarev_bound_constant(const SampleBatch& x0_batch, const SampleBatch& vinf_batch,
                                double delta);

}  // namespace kacsim

#endif
