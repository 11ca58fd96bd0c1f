#include "kcut/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kcut/errors.hpp"

namespace kcut {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 100000;

// x^a e^{-x} / Gamma(a), the common prefactor of both expansions.
double prefactor(double a, double x) {
  return std::exp(a * std::log(x) - x - std::lgamma(a));
}

// Series for P; converges for all x but is used only for x < a + 1.
double p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) return sum * prefactor(a, x);
  }
  throw NumericError("gamma_p series did not converge for a=" + std::to_string(a) +
                     " x=" + std::to_string(x));
}

// Modified Lentz evaluation of the continued fraction for Q, x >= a + 1.
double q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h * prefactor(a, x);
  }
  throw NumericError("gamma_q continued fraction did not converge for a=" + std::to_string(a) +
                     " x=" + std::to_string(x));
}

void check_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || std::isnan(x))
    throw DomainError("incomplete gamma needs a > 0 and x >= 0");
}

}  // namespace

double gamma_p(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (a == 1.0) return -std::expm1(-x);
  if (a == 0.5) return std::erf(std::sqrt(x));
  if (x < a + 1.0) return p_series(a, x);
  return 1.0 - q_fraction(a, x);
}

double gamma_q(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (a == 1.0) return std::exp(-x);
  if (a == 0.5) return std::erfc(std::sqrt(x));
  if (x < a + 1.0) return 1.0 - p_series(a, x);
  return q_fraction(a, x);
}

GammaTail::GammaTail(int k) : k_(k) {
  if (k < 1) throw ParameterError("GammaTail needs k >= 1");
}

double GammaTail::operator()(double x) const {
  if (x <= 0.0) return 1.0;
  if (x < k_ + 1.0) return 1.0 - complement(x);
  // e^{-x} sum_{j<k} x^j/j!, summed from the largest term down.
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < k_; ++j) {
    term *= x / j;
    sum += term;
  }
  return sum * std::exp(-x);
}

double GammaTail::complement(double x) const {
  if (x <= 0.0) return 0.0;
  if (k_ == 1) return -std::expm1(-x);
  if (x < k_ + 1.0) return p_series(k_, x);
  return 1.0 - (*this)(x);
}

double GammaTail::log(double x) const {
  if (x <= 0.0) return 0.0;
  if (k_ == 1) return -x;
  if (x < k_ + 1.0) return std::log1p(-complement(x));
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < k_; ++j) {
    term *= x / j;
    sum += term;
  }
  return std::log(sum) - x;
}

}  // namespace kcut
