#include "kacsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "kacsim/errors.hpp"

namespace kacsim {

std::vector<std::complex<double>> empirical_cf(const SampleBatch& batch,
                                               const std::vector<double>& xi_grid) {
  if (batch.values.empty()) throw NumericError("empirical_cf: empty batch");
  std::vector<std::complex<double>> out(xi_grid.size());
  for (std::size_t g = 0; g < xi_grid.size(); ++g) {
    const double xi = xi_grid[g];
    double re = 0.0, im = 0.0;
    for (double x : batch.values) {
      re += std::cos(xi * x);
      im += std::sin(xi * x);
    }
    out[g] = std::complex<double>(re, im) / static_cast<double>(batch.values.size());
  }
  return out;
}

double ks_distance(const SampleBatch& batch, const std::function<double(double)>& reference_cdf) {
  if (batch.values.empty()) throw NumericError("ks_distance: empty batch");
  std::vector<double> sorted = batch.values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  // Tie groups jump the empirical CDF per distinct value; the reference is
  // evaluated from the left as well so a jump shared with the reference (an
  // atom present in both) is not over-counted.
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double left = reference_cdf(std::nextafter(sorted[i], -1.0 / 0.0));
    const double right = reference_cdf(sorted[i]);
    d = std::max(d, std::max(left - static_cast<double>(i) / n,
                             static_cast<double>(j) / n - right));
    i = j;
  }
  return std::max(d, 0.0);
}

double ks_distance_two_sample(const SampleBatch& a, const SampleBatch& b) {
  if (a.values.empty() || b.values.empty())
    throw NumericError("ks_distance_two_sample: empty batch");
  std::vector<double> x = a.values, y = b.values;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  // Shared atoms must advance both sides before the gap is measured.
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / x.size() -
                              static_cast<double>(j) / y.size()));
  }
  return d;
}

namespace {

// Sorted-values quantile coupling; the smaller batch is paired against
// interpolated quantiles of the larger.
double coupling_cost(std::vector<double> x, std::vector<double> y, double delta) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  if (x.size() == y.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::pow(std::fabs(x[i] - y[i]), delta);
    return acc / static_cast<double>(x.size());
  }
  const std::vector<double>& small = x.size() < y.size() ? x : y;
  const std::vector<double>& large = x.size() < y.size() ? y : x;
  const double m = static_cast<double>(large.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < small.size(); ++i) {
    const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(small.size());
    const double pos = q * m - 0.5;
    const std::size_t lo = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, m - 1.0));
    const std::size_t hi = std::min(lo + 1, large.size() - 1);
    const double frac = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
    const double yq = large[lo] + frac * (large[hi] - large[lo]);
    acc += std::pow(std::fabs(small[i] - yq), delta);
  }
  return acc / static_cast<double>(small.size());
}

}  // namespace

double wasserstein_cost(const SampleBatch& a, const SampleBatch& b, double delta) {
  if (a.values.empty() || b.values.empty()) throw NumericError("wasserstein: empty batch");
  if (!(delta > 0.0) || !(delta <= 2.0)) throw NumericError("wasserstein: delta must be in (0,2]");
  return coupling_cost(a.values, b.values, delta);
}

double wasserstein_distance(const SampleBatch& a, const SampleBatch& b, double delta) {
  const double cost = wasserstein_cost(a, b, delta);
  return std::pow(cost, 1.0 / std::max(delta, 1.0));
}

RateFit fit_decay_rate(const std::vector<RatePoint>& points, const KernelSpec& spec,
                       double gamma, double delta, double resolution_floor) {
  RateFit fit;
  fit.predicted_slope = delta * (spectral_mu(spec, gamma) - spectral_mu(spec, delta));
  fit.resolution_floor = resolution_floor;
  for (const RatePoint& p : points) {
    if (p.distance > resolution_floor && p.distance > 0.0)
      fit.points.push_back(p);
    else
      ++fit.excluded_points;
  }
  if (fit.points.size() < 3)
    throw NumericError("fit_decay_rate: fewer than 3 points above the resolution floor");

  const double n = static_cast<double>(fit.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const RatePoint& p : fit.points) {
    const double y = std::log(p.distance);
    sx += p.t;
    sy += y;
    sxx += p.t * p.t;
    sxy += p.t * y;
    syy += y * y;
  }
  const double sxx_c = n * sxx - sx * sx;
  const double sxy_c = n * sxy - sx * sy;
  const double syy_c = n * syy - sy * sy;
  if (sxx_c <= 0.0) throw NumericError("fit_decay_rate: degenerate t values");
  fit.slope = -sxy_c / sxx_c;
  fit.r_squared = syy_c > 0.0 ? (sxy_c * sxy_c) / (sxx_c * syy_c) : 1.0;
  return fit;
}

double zolotarev_bound_constant(const SampleBatch& x0_batch, const SampleBatch& vinf_batch,
                                double delta) {
  if (x0_batch.values.empty() || vinf_batch.values.empty())
    throw NumericError("zolotarev_bound_constant: empty batch");
  if (!(delta > 0.0) || !(delta <= 3.0))
    throw NumericError("zolotarev_bound_constant: delta must be in (0,3]");
  auto abs_moment = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += std::pow(std::fabs(x), delta);
    return acc / static_cast<double>(v.size());
  };
  return (abs_moment(x0_batch.values) + abs_moment(vinf_batch.values)) / std::tgamma(1.0 + delta);
}

}  // namespace kacsim
