#pragma once

namespace kcut {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// g(x) = P(Gamma(k) > x) = Q(k, x) for integer k >= 1, with an accurate
/// logarithm for the powers g(x)^D that appear in the record integrals.
class GammaTail {
 public:
  explicit GammaTail(int k);

  int k() const { return k_; }
  double operator()(double x) const;
  /// Complement 1 - g(x) = P(k, x), accurate for small x.
  double complement(double x) const;
  /// log g(x); equals -infinity only when g underflows.
  double log(double x) const;

 private:
  int k_;
};

}  // namespace kcut
