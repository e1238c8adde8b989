#ifndef KACSIM_NUMERIC_HPP
#define KACSIM_NUMERIC_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace kacsim {

// pow(x, s) under the convention 0^0 = 0 used by the spectral function.
double pow0(double x, double s);

// log of the Pochhammer symbol (a)_n = Gamma(a+n)/Gamma(a), a > 0.
double log_pochhammer(double a, double n);

// Regularized lower incomplete gamma P(a, x); CDF of Gamma(a, 1).
double gamma_cdf(double a, double x);

// Nodes/weights of the n-point Gauss-Legendre rule on [0, 1] (cached).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_legendre_01(int n);

// Exact nonnegative rational on __int128, for small tree-shape probabilities.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long num, long long den);

  Rational operator+(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }

  double to_double() const;
  long long numerator() const { return static_cast<long long>(num_); }
  long long denominator() const { return static_cast<long long>(den_); }

 private:
  Rational(__int128 num, __int128 den, bool reduce);
  __int128 num_, den_;
};

// Apply fn to every composition (i_1,...,i_parts) of `total` into nonnegative
// parts, in lexicographic order.
void for_each_composition(std::int64_t total, int parts,
                          const std::function<void(const std::vector<std::int64_t>&)>& fn);

}  // namespace kacsim

#endif
