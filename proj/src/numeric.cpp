#include "kacsim/numeric.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "kacsim/errors.hpp"

namespace kacsim {

double pow0(double x, double s) {
  if (x == 0.0) return 0.0;
  if (s == 0.0) return 1.0;
  return std::pow(x, s);
}

double log_pochhammer(double a, double n) {
  return std::lgamma(a + n) - std::lgamma(a);
}

namespace {

// Series expansion of P(a,x), valid for x < a+1.
double gammp_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) = 1 - P(a,x), valid for x >= a+1.
double gammq_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_cdf(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (a <= 0.0) throw NumericError("gamma_cdf: shape must be positive");
  if (x < a + 1.0) return gammp_series(a, x);
  return 1.0 - gammq_cf(a, x);
}

const QuadratureRule& gauss_legendre_01(int n) {
  static std::mutex mtx;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n, starting from the Chebyshev guess.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::fabs(z - z1) < 1e-15) break;
    }
    // Map from [-1,1] to [0,1].
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    const double w = 1.0 / ((1.0 - z * z) * pp * pp);  // = 2/((1-z^2)pp^2) / 2
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  auto [pos, inserted] = cache.emplace(n, std::move(rule));
  (void)inserted;
  return pos->second;
}

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

}  // namespace

Rational::Rational(long long num, long long den) : Rational(__int128(num), __int128(den), true) {}

Rational::Rational(__int128 num, __int128 den, bool reduce) : num_(num), den_(den) {
  if (den_ == 0) throw NumericError("Rational: zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (reduce && num_ != 0) {
    const __int128 g = gcd128(num_, den_);
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_, true);
}

Rational Rational::operator*(const Rational& o) const {
  // Cross-reduce before multiplying to keep intermediates small.
  const __int128 g1 = gcd128(num_ == 0 ? 1 : num_, o.den_);
  const __int128 g2 = gcd128(o.num_ == 0 ? 1 : o.num_, den_);
  return Rational((num_ / g1) * (o.num_ / g2), (den_ / g2) * (o.den_ / g1), true);
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

void for_each_composition(std::int64_t total, int parts,
                          const std::function<void(const std::vector<std::int64_t>&)>& fn) {
  std::vector<std::int64_t> comp(parts, 0);
  std::function<void(int, std::int64_t)> rec = [&](int idx, std::int64_t remaining) {
    if (idx == parts - 1) {
      comp[idx] = remaining;
      fn(comp);
      return;
    }
    for (std::int64_t v = 0; v <= remaining; ++v) {
      comp[idx] = v;
      rec(idx + 1, remaining - v);
    }
  };
  if (parts <= 0) throw NumericError("for_each_composition: parts must be positive");
  rec(0, total);
}

}  // namespace kacsim
