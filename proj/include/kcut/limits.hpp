#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kcut/tree.hpp"

namespace kcut {

struct Estimate {
  double value = 0.0;
  double error_estimate = 0.0;
  std::string method;
};

/// Nonnegative continuous function on [0, 1], linear between breakpoints.
class PiecewiseLinearWalk {
 public:
  PiecewiseLinearWalk(std::vector<double> breakpoints, std::vector<double> values);

  /// f(t) = 2t on [0, 1/2], 2 - 2t on [1/2, 1].
  static PiecewiseLinearWalk tent();
  static PiecewiseLinearWalk constant(double c);
  /// V_n(2(n-1)t) scaled by `scale`; n = 1 gives the zero function.
  static PiecewiseLinearWalk from_dfs_walk(const DfsWalk& w, double scale = 1.0);

  double operator()(double t) const;
  /// Infimum of f over [a, b] (a <= b).
  double inf(double a, double b) const;
  /// Integral of f^{-p} over [0, 1] for 0 < p < 1, in closed form per
  /// segment. Throws IntegrabilityError when it diverges.
  double inverse_power_integral(double p) const;

  const std::vector<double>& breakpoints() const { return t_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> t_, v_;
};

double walk_L(const PiecewiseLinearWalk& f, std::span<const double> ts);
std::vector<double> walk_D(const PiecewiseLinearWalk& f, std::span<const double> ts);

/// Ordered-region integral
///   H = int_{x_1 > ... > x_q > 0} exp(-sum_i D_i x_i^k / k!) dx
/// for gap weights D (D_1 > 0, others >= 0), q <= 4.
Estimate ordered_exp_integral(int k, std::span<const double> D, double rel_tol = 1e-11);

/// H_{f,q}(t) = ordered_exp_integral(k, walk_D(f, t)).
Estimate walk_H(const PiecewiseLinearWalk& f, int k, std::span<const double> ts);

struct MqOptions {
  std::uint64_t samples = 10000;  // Monte Carlo budget for q >= 3
  std::uint64_t seed = 1;
  double tol = 0.0;  // 0 selects 1e-10 for q = 1 and 1e-7 for q = 2
};

/// m_q(f): closed form (q = 1), nested quadrature (q = 2), Monte Carlo over
/// t with quadrature for H (q = 3, 4).
Estimate m_q(const PiecewiseLinearWalk& f, int k, int q, const MqOptions& opt = {});

enum class EtaMethod { radial, poisson };

/// eta_{k,q} = E[Z^q] of the CRT limit, by Monte Carlo.
Estimate eta(int k, int q, std::uint64_t samples, std::uint64_t seed, EtaMethod method = EtaMethod::radial);

double eta_k1_closed(int k);
double rayleigh_moment(int q);
double loght_limit(int k);

/// MC estimate of P(G_1 >= ... >= G_q) for i.i.d. Gamma(1/k, 1).
Estimate ordered_gamma_probability(int k, int q, std::uint64_t samples, std::uint64_t seed);

/// Limit of n^{-1+r/2k} E[K_r] for CGW trees with offspring sd sigma.
double kr_limit_cgw(int k, int r, double sigma);

/// E[int_0^1 B_ex(t)^{-r/k} dt] = 2^{-r/2k} Gamma(1 - r/2k); r < 2k.
double excursion_inverse_moment(int k, double r);

/// E[Z_zeta^q] for discrete zeta: atoms with weights (normalized here).
Estimate z_zeta_moments(const std::vector<double>& atoms, const std::vector<double>& weights, int k, int q,
                        std::uint64_t budget, std::uint64_t seed);

/// Limit of (scaled) E[K_r] on log-height families with discrete zeta:
/// (k!)^{r/k} Gamma(r/k) / (k Gamma(r)) E[zeta^{-r/k}].
double record_mean_limit_zeta(const std::vector<double>& atoms, const std::vector<double>& weights, int k, int r);

/// Limit of n^{-1+r/k} E[K_r] along a walk with shape f (path: tent), r < k:
/// (k!)^{r/k} Gamma(r/k) / (k Gamma(r)) int f^{-r/k}.
double record_mean_limit_walk(const PiecewiseLinearWalk& f, int k, int r);

}  // namespace kcut
