#include "kcut/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kcut/errors.hpp"
#include "kcut/quadrature.hpp"
#include "kcut/rng.hpp"
#include "kcut/special.hpp"

namespace kcut {
namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

void check_k(int k) {
  if (k < 1) throw ParameterError("k must be >= 1");
}

// Samples are drawn in fixed-size chunks, each with its own derived seed,
// and reduced in chunk order; a parallel split over chunks gives the same sums.
constexpr std::uint64_t kChunk = 1 << 16;

// Sums are taken around the first sample with Neumaier compensation, so
// near-constant draws keep full precision in both mean and variance.
struct Accumulator {
  double shift = 0.0, sum = 0.0, comp = 0.0, sumsq = 0.0;
  std::uint64_t n = 0;
  void add(double x) {
    if (n == 0) shift = x;
    const double d = x - shift;
    const double t = sum + d;
    comp += std::abs(sum) >= std::abs(d) ? (sum - t) + d : (d - t) + sum;
    sum = t;
    sumsq += d * d;
    ++n;
  }
  double mean() const { return n ? shift + (sum + comp) / n : 0.0; }
  double stderr_() const {
    if (n < 2) return 0.0;
    const double m = (sum + comp) / n;
    const double var = std::max(0.0, (sumsq - n * m * m) / (n - 1));
    return std::sqrt(var / n);
  }
};

template <class Draw>
Accumulator run_chunks(std::uint64_t samples, std::uint64_t seed, Draw&& draw) {
  Accumulator acc;
  for (std::uint64_t c = 0; c * kChunk < samples; ++c) {
    Rng rng(mix_seed(seed, c, 0));
    const auto count = std::min(kChunk, samples - c * kChunk);
    for (std::uint64_t i = 0; i < count; ++i) acc.add(draw(rng));
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------- walks

PiecewiseLinearWalk::PiecewiseLinearWalk(std::vector<double> breakpoints, std::vector<double> values)
    : t_(std::move(breakpoints)), v_(std::move(values)) {
  if (t_.size() < 2 || t_.size() != v_.size())
    throw ParameterError("walk needs matching breakpoints and values, at least two");
  if (t_.front() != 0.0 || t_.back() != 1.0) throw ParameterError("walk domain must be exactly [0, 1]");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (i > 0 && !(t_[i] > t_[i - 1])) throw ParameterError("walk breakpoints must be increasing");
    if (!(v_[i] >= 0.0) || !std::isfinite(v_[i])) throw ParameterError("walk values must be finite and >= 0");
  }
}

PiecewiseLinearWalk PiecewiseLinearWalk::tent() { return {{0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}}; }

PiecewiseLinearWalk PiecewiseLinearWalk::constant(double c) { return {{0.0, 1.0}, {c, c}}; }

PiecewiseLinearWalk PiecewiseLinearWalk::from_dfs_walk(const DfsWalk& w, double scale) {
  const auto steps = w.values.size() - 1;
  if (steps == 0) return constant(0.0);
  std::vector<double> t(steps + 1), v(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(steps);
    v[i] = scale * w.values[i];
  }
  t.back() = 1.0;
  return {std::move(t), std::move(v)};
}

double PiecewiseLinearWalk::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("walk argument outside [0, 1]");
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.end()) return v_.back();
  const auto j = static_cast<std::size_t>(it - t_.begin());  // t_[j-1] <= t < t_[j]
  const double a = t_[j - 1], b = t_[j];
  if (t == a) return v_[j - 1];
  return v_[j - 1] + (v_[j] - v_[j - 1]) * ((t - a) / (b - a));
}

double PiecewiseLinearWalk::inf(double a, double b) const {
  double m = std::min((*this)(a), (*this)(b));
  for (auto it = std::upper_bound(t_.begin(), t_.end(), a); it != t_.end() && *it < b; ++it)
    m = std::min(m, v_[it - t_.begin()]);
  return m;
}

double PiecewiseLinearWalk::inverse_power_integral(double p) const {
  if (!(p > 0.0)) throw ParameterError("inverse power must be positive");
  double total = 0.0;
  for (std::size_t i = 1; i < t_.size(); ++i) {
    const double h = t_[i] - t_[i - 1], fa = v_[i - 1], fb = v_[i];
    if ((fa == 0.0 || fb == 0.0) && (p >= 1.0 || fa == fb))
      throw IntegrabilityError("integral of f^{-" + std::to_string(p) + "} diverges near t = " +
                               std::to_string(fa == 0.0 ? t_[i - 1] : t_[i]));
    if (fa == fb) {
      total += h * std::pow(fa, -p);
    } else if (p == 1.0) {
      total += h * std::log(fb / fa) / (fb - fa);
    } else {
      total += h * (std::pow(fb, 1.0 - p) - std::pow(fa, 1.0 - p)) / ((1.0 - p) * (fb - fa));
    }
  }
  return total;
}

namespace {

void check_times(std::span<const double> ts) {
  if (ts.empty()) throw ParameterError("walk functional needs at least one time");
  for (double t : ts)
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("time " + std::to_string(t) + " outside [0, 1]");
}

}  // namespace

double walk_L(const PiecewiseLinearWalk& f, std::span<const double> ts) {
  check_times(ts);
  std::vector<double> s(ts.begin(), ts.end());
  std::sort(s.begin(), s.end());
  double total = f(s[0]);
  for (std::size_t i = 1; i < s.size(); ++i) total += f(s[i]) - f.inf(s[i - 1], s[i]);
  return total;
}

std::vector<double> walk_D(const PiecewiseLinearWalk& f, std::span<const double> ts) {
  check_times(ts);
  std::vector<double> out;
  double prev = 0.0;
  for (std::size_t i = 1; i <= ts.size(); ++i) {
    const double l = walk_L(f, ts.first(i));
    out.push_back(std::max(0.0, l - prev));
    prev = l;
  }
  return out;
}

// ------------------------------------------------------ ordered integrals

Estimate ordered_exp_integral(int k, std::span<const double> D, double rel_tol) {
  check_k(k);
  const int q = static_cast<int>(D.size());
  if (q < 1 || q > 4) throw ParameterError("ordered integral supports 1 <= q <= 4");
  if (!(D[0] > 0.0)) throw IntegrabilityError("ordered integral diverges: first weight must be positive");
  for (double d : D)
    if (!(d >= 0.0) || !std::isfinite(d)) throw ParameterError("weights must be finite and >= 0");
  const double kf = factorial(k);
  const double inv_k = 1.0 / k;
  const double gk = std::tgamma(inv_k);
  auto scale = [&](double d) { return std::pow(kf / d, inv_k); };
  auto xk = [k](double x) {
    double p = x;
    for (int j = 1; j < k; ++j) p *= x;
    return p;
  };
  // int_a^inf exp(-d x^k / k!) dx and int_0^a of the same, in closed form.
  auto tail = [&](double d, double a) {
    const double c = inv_k * scale(d) * gk;
    return a <= 0.0 ? c : c * gamma_q(inv_k, d * xk(a) / kf);
  };
  auto head = [&](double d, double a) {
    if (d == 0.0) return a;
    return a <= 0.0 ? 0.0 : inv_k * scale(d) * gk * gamma_p(inv_k, d * xk(a) / kf);
  };
  if (q == 1) {
    const double c = tail(D[0], 0.0);
    return {c, 1e-15 * c, "closed"};
  }

  // Pivot on x_2: the x_1 > x_2 factor and, for q = 3, the x_3 < x_2
  // factor are closed forms; q = 4 keeps one inner integral over x_3.
  const double lead = D[0] + D[1];
  const double upper = std::pow((50.0 + 10.0 * q) * kf / lead, inv_k);
  double smallest = scale(lead);
  for (int i = 0; i < q; ++i)
    if (D[i] > 0.0) smallest = std::min(smallest, scale(D[i]));
  QuadOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = rel_tol;
  for (double x = smallest / 8.0; x < upper; x *= 4.0) opt.breakpoints.push_back(x);
  QuadOptions inner_opt = opt;
  inner_opt.rel_tol = rel_tol * 0.1;

  auto below = [&](double x) -> double {
    if (q == 2) return 1.0;
    if (q == 3) return head(D[2], x);
    return integrate([&](double y) { return std::exp(-D[2] * xk(y) / kf) * head(D[3], y); }, 0.0, x, inner_opt)
        .value;
  };
  const auto res = integrate(
      [&](double x) { return std::exp(-D[1] * xk(x) / kf) * tail(D[0], x) * below(x); }, 0.0, upper, opt);
  return {res.value, res.abs_error + 2e-15 * res.value, "pivot-quadrature"};
}

Estimate walk_H(const PiecewiseLinearWalk& f, int k, std::span<const double> ts) {
  const auto d = walk_D(f, ts);
  return ordered_exp_integral(k, d);
}

// ----------------------------------------------------------------- m_q

Estimate m_q(const PiecewiseLinearWalk& f, int k, int q, const MqOptions& opt) {
  check_k(k);
  if (q < 0 || q > 4) throw ParameterError("m_q supports 0 <= q <= 4");
  if (q == 0) return {1.0, 0.0, "exact"};
  const double integral = f.inverse_power_integral(1.0 / k);  // throws when divergent
  const double kf = factorial(k);
  if (q == 1) {
    const double v = std::pow(kf, 1.0 / k) * std::tgamma(1.0 + 1.0 / k) * integral;
    return {v, 1e-15 * v, "closed-form"};
  }
  if (q == 2) {
    const double tol = opt.tol > 0.0 ? opt.tol : 1e-7;
    const auto& bps = f.breakpoints();
    const auto& vals = f.values();
    auto inner = [&](double t1) {
      QuadOptions io;
      io.abs_tol = 1e-300;
      io.rel_tol = tol * 0.1;
      io.breakpoints = bps;
      io.breakpoints.push_back(t1);
      return integrate(
                 [&](double t2) {
                   const double ts[2] = {t1, t2};
                   return walk_H(f, k, ts).value;
                 },
                 0.0, 1.0, io)
          .value;
    };
    // On segments ending at a zero of f, t = zero +- h u^2 removes the
    // f(t1)^{-1/k} endpoint singularity. Where h u^2 underflows the
    // transformed integrand is O(u^{1-2/k}) and is taken as 0.
    double total = 0.0, err = 0.0;
    for (std::size_t i = 1; i < bps.size(); ++i) {
      const double a = bps[i - 1], b = bps[i], h = b - a;
      QuadOptions oo;
      oo.abs_tol = 1e-300;
      oo.rel_tol = tol * 0.5;
      oo.max_intervals = 400;
      QuadResult r;
      if (vals[i - 1] == 0.0)
        r = integrate([&](double u) { return h * u * u > 0.0 ? 2.0 * h * u * inner(a + h * u * u) : 0.0; }, 0.0, 1.0, oo);
      else if (vals[i] == 0.0)
        r = integrate([&](double u) { return b - h * u * u < b ? 2.0 * h * u * inner(b - h * u * u) : 0.0; }, 0.0, 1.0, oo);
      else
        r = integrate(inner, a, b, oo);
      total += r.value;
      err += r.abs_error;
    }
    return {2.0 * total, 2.0 * err + tol * 0.1 * 2.0 * total, "nested-quadrature"};
  }
  const auto acc = run_chunks(opt.samples, opt.seed, [&](Rng& rng) {
    std::vector<double> ts(q);
    for (auto& t : ts) t = rng.uniform();
    return walk_H(f, k, ts).value;
  });
  const double qf = factorial(q);
  return {qf * acc.mean(), qf * acc.stderr_(), "monte-carlo"};
}

// ----------------------------------------------------------------- eta

double eta_k1_closed(int k) {
  check_k(k);
  const double kk = k;
  return std::pow(2.0, -1.0 / (2 * kk)) * std::pow(factorial(k), 1.0 / kk) / kk * std::tgamma(1.0 / kk) *
         std::tgamma(1.0 - 1.0 / (2 * kk));
}

double rayleigh_moment(int q) {
  if (q < 0) throw ParameterError("moment order must be >= 0");
  return std::pow(2.0, q / 2.0) * std::tgamma(1.0 + q / 2.0);
}

double loght_limit(int k) {
  check_k(k);
  return std::pow(factorial(k), 1.0 / k) * std::tgamma(1.0 + 1.0 / k);
}

Estimate eta(int k, int q, std::uint64_t samples, std::uint64_t seed, EtaMethod method) {
  check_k(k);
  if (q < 0 || q > 4) throw ParameterError("eta supports 0 <= q <= 4");
  if (q == 0) return {1.0, 0.0, "exact"};
  if (samples < 2) throw NumericError("eta needs at least 2 samples");
  const double qf = factorial(q);
  double quad_err = 0.0;
  if (method == EtaMethod::poisson) {
    // First q points of the intensity x dx Poisson process; D = their gaps.
    const auto acc = run_chunks(samples, seed, [&](Rng& rng) {
      double gsum = 0.0, prev = 0.0;
      std::vector<double> d(q);
      for (int i = 0; i < q; ++i) {
        gsum += rng.exponential();
        const double y = std::sqrt(2.0 * gsum);
        d[i] = y - prev;
        prev = y;
      }
      const auto h = ordered_exp_integral(k, d);
      quad_err += h.error_estimate;
      return h.value;
    });
    const double value = qf * acc.mean();
    const double qe = qf * quad_err / acc.n;
    return {value, std::sqrt(std::pow(qf * acc.stderr_(), 2) + qe * qe) + 1e-13 * value, "poisson"};
  }
  // Radial split y = s u with u_q = 1: the s-integral is a Gamma function,
  // and u_i = V_(i)^{1/gamma} for sorted uniforms V cancels the
  // density and the f(t_1)^{-1/k} blow-up of H.
  const double g = 2.0 - 1.0 / k;
  const double c = std::pow(2.0, (q * g - 2.0) / 2.0) * std::tgamma(q * g / 2.0) /
                   (std::pow(g, q - 1) * factorial(q - 1));
  const auto acc = run_chunks(samples, seed, [&](Rng& rng) {
    std::vector<double> v(q - 1);
    for (auto& x : v) x = rng.uniform();
    std::sort(v.begin(), v.end());
    std::vector<double> d(q);
    double weight = 1.0, prev = 0.0;
    for (int i = 0; i < q - 1; ++i) {
      const double u = std::pow(v[i], 1.0 / g);
      weight *= std::pow(v[i], 1.0 / (g * k));
      d[i] = u - prev;
      prev = u;
    }
    d[q - 1] = 1.0 - prev;
    const auto h = ordered_exp_integral(k, d);
    quad_err += weight * h.error_estimate;
    return weight * h.value;
  });
  const double scale = qf * c;
  const double value = scale * acc.mean();
  const double qe = scale * quad_err / acc.n;
  return {value, std::sqrt(std::pow(scale * acc.stderr_(), 2) + qe * qe) + 1e-13 * value, "radial"};
}

Estimate ordered_gamma_probability(int k, int q, std::uint64_t samples, std::uint64_t seed) {
  check_k(k);
  if (q < 1) throw ParameterError("q must be >= 1");
  if (q == 1) return {1.0, 0.0, "exact"};
  if (samples < 2) throw NumericError("need at least 2 samples");
  const double shape = 1.0 / k;
  const auto acc = run_chunks(samples, seed, [&](Rng& rng) {
    double prev = rng.gamma(shape);
    bool ordered = true;
    for (int i = 1; i < q; ++i) {
      const double x = rng.gamma(shape);
      if (x > prev) ordered = false;
      prev = x;
    }
    return ordered ? 1.0 : 0.0;
  });
  return {acc.mean(), acc.stderr_(), "monte-carlo"};
}

// ------------------------------------------------------ closed constants

double kr_limit_cgw(int k, int r, double sigma) {
  check_k(k);
  if (r < 1 || r > k) throw ParameterError("r must be in 1..k");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  const double s = static_cast<double>(r) / k;
  return std::pow(factorial(k), s) / k * std::tgamma(s) * std::tgamma(1.0 - s / 2.0) / std::tgamma(r) *
         std::pow(sigma / std::sqrt(2.0), s);
}

double excursion_inverse_moment(int k, double r) {
  check_k(k);
  if (r < 0.0) throw ParameterError("r must be >= 0");
  if (r >= 2.0 * k) throw IntegrabilityError("E[int B_ex^{-r/k}] diverges for r >= 2k");
  const double s = r / k;
  return std::pow(2.0, -s / 2.0) * std::tgamma(1.0 - s / 2.0);
}

namespace {

std::vector<double> normalized(const std::vector<double>& atoms, const std::vector<double>& weights) {
  if (atoms.empty()) throw ParameterError("zeta needs at least one atom");
  for (double a : atoms)
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("zeta atoms must be positive and finite");
  std::vector<double> w = weights;
  if (w.empty()) w.assign(atoms.size(), 1.0);
  if (w.size() != atoms.size()) throw ParameterError("zeta weights must match atoms");
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw ParameterError("zeta weights must be >= 0");
    total += x;
  }
  if (!(total > 0.0)) throw ParameterError("zeta weights must not all be zero");
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

Estimate z_zeta_moments(const std::vector<double>& atoms, const std::vector<double>& weights, int k, int q,
                        std::uint64_t budget, std::uint64_t seed) {
  check_k(k);
  if (q < 0 || q > 4) throw ParameterError("z_zeta_moments supports 0 <= q <= 4");
  const auto w = normalized(atoms, weights);
  if (q == 0) return {1.0, 0.0, "exact"};
  const double kf = factorial(k);
  const double qf = factorial(q);
  const auto m = atoms.size();
  // sum_i of D = zeta normalizers: int_0^inf exp(-zeta x^k/k!) dx.
  auto norm = [&](double z) { return std::pow(kf / z, 1.0 / k) * std::tgamma(1.0 + 1.0 / k); };
  // For q >= 3, H = prod N_i * P(X_1 >= ... >= X_q) where X_i has density
  // proportional to exp(-zeta_i x^k / k!), i.e. X_i = (k! G_i / zeta_i)^{1/k}
  // with G_i ~ Gamma(1/k).
  auto ordering_mc = [&](const std::vector<double>& z, std::uint64_t n, std::uint64_t s) {
    return run_chunks(n, s, [&](Rng& rng) {
      double prev = std::numeric_limits<double>::infinity();
      for (double zi : z) {
        const double x = std::pow(kf * rng.gamma(1.0 / k) / zi, 1.0 / k);
        if (x > prev) return 0.0;
        prev = x;
      }
      return 1.0;
    });
  };

  double tuples = 1.0;
  for (int i = 0; i < q; ++i) tuples *= static_cast<double>(m);
  if (tuples <= 1e4) {
    double value = 0.0, var = 0.0, qerr = 0.0;
    const auto count = static_cast<std::uint64_t>(tuples);
    const std::uint64_t per = std::max<std::uint64_t>(1000, budget / std::max<std::uint64_t>(count, 1));
    std::vector<std::size_t> idx(q, 0);
    for (std::uint64_t t = 0; t < count; ++t) {
      std::vector<double> z(q);
      double prob = 1.0, nprod = 1.0;
      for (int i = 0; i < q; ++i) {
        z[i] = atoms[idx[i]];
        prob *= w[idx[i]];
        nprod *= norm(z[i]);
      }
      if (prob > 0.0) {
        if (q <= 2) {
          const auto h = ordered_exp_integral(k, z);
          value += prob * h.value;
          qerr += prob * h.error_estimate;
        } else {
          const auto acc = ordering_mc(z, per, mix_seed(seed, t, 1));
          value += prob * nprod * acc.mean();
          var += std::pow(prob * nprod * acc.stderr_(), 2);
        }
      }
      for (int i = q - 1; i >= 0; --i) {
        if (++idx[i] < m) break;
        idx[i] = 0;
      }
    }
    return {qf * value, qf * (std::sqrt(var) + qerr) + 1e-13 * qf * value,
            q <= 2 ? "enumeration-quadrature" : "enumeration-monte-carlo"};
  }
  // Large support: sample the tuple too.
  if (budget < 2) throw NumericError("z_zeta_moments needs a budget of at least 2");
  std::vector<double> cdf(m);
  std::partial_sum(w.begin(), w.end(), cdf.begin());
  const auto acc = run_chunks(budget, seed, [&](Rng& rng) {
    std::vector<double> z(q);
    for (auto& zi : z) {
      const auto j = std::min<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), rng.uniform()) - cdf.begin(), m - 1);
      zi = atoms[j];
    }
    if (q <= 2) return ordered_exp_integral(k, z).value;
    double nprod = 1.0;
    for (double zi : z) nprod *= norm(zi);
    double prev = std::numeric_limits<double>::infinity();
    for (double zi : z) {
      const double x = std::pow(kf * rng.gamma(1.0 / k) / zi, 1.0 / k);
      if (x > prev) return 0.0;
      prev = x;
    }
    return nprod;
  });
  return {qf * acc.mean(), qf * acc.stderr_(), "monte-carlo"};
}

double record_mean_limit_zeta(const std::vector<double>& atoms, const std::vector<double>& weights, int k, int r) {
  check_k(k);
  if (r < 1 || r > k) throw ParameterError("r must be in 1..k");
  const auto w = normalized(atoms, weights);
  const double s = static_cast<double>(r) / k;
  double e = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) e += w[i] * std::pow(atoms[i], -s);
  return std::pow(factorial(k), s) * std::tgamma(s) / (k * std::tgamma(r)) * e;
}

double record_mean_limit_walk(const PiecewiseLinearWalk& f, int k, int r) {
  check_k(k);
  if (r < 1 || r > k) throw ParameterError("r must be in 1..k");
  const double s = static_cast<double>(r) / k;
  return std::pow(factorial(k), s) * std::tgamma(s) / (k * std::tgamma(r)) * f.inverse_power_integral(s);
}

}  // namespace kcut
