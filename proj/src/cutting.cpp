#include "kcut/cutting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "kcut/errors.hpp"
#include "kcut/quadrature.hpp"
#include "kcut/special.hpp"

namespace kcut {
namespace {

void check_k(int k) {
  if (k < 1) throw ParameterError("k must be >= 1");
}

// Fenwick tree over 0/1 "still in the root component" flags.
class AliveSet {
 public:
  explicit AliveSet(std::int32_t n) : n_(n), bit_(n + 1, 0), alive_(n, 1) {
    for (std::int32_t i = 1; i <= n; ++i) {
      bit_[i] += 1;
      const auto j = i + (i & -i);
      if (j <= n) bit_[j] += bit_[i];
    }
    count_ = n;
    top_ = 1;
    while (top_ * 2 <= n) top_ *= 2;
  }
  std::int32_t count() const { return count_; }
  bool alive(std::int32_t v) const { return alive_[v]; }
  void remove(std::int32_t v) {
    alive_[v] = 0;
    --count_;
    for (auto i = v + 1; i <= n_; i += i & -i) --bit_[i];
  }
  // Index of the (m+1)-th alive vertex, 0 <= m < count.
  std::int32_t select(std::int32_t m) const {
    std::int32_t pos = 0;
    for (auto step = top_; step > 0; step >>= 1) {
      const auto next = pos + step;
      if (next <= n_ && bit_[next] <= m) {
        pos = next;
        m -= bit_[next];
      }
    }
    return pos;
  }

 private:
  std::int32_t n_;
  std::vector<std::int32_t> bit_;
  std::vector<char> alive_;
  std::int32_t count_ = 0, top_ = 1;
};

double factorial(int k) { return std::tgamma(k + 1.0); }

double rank_density(int r, double x) {
  if (x <= 0.0) return r == 1 ? 1.0 : 0.0;
  return std::exp((r - 1) * std::log(x) - x - std::lgamma(static_cast<double>(r)));
}

// Geometric breakpoints where g(x)^D switches off, D = 2^j up to dmax.
std::vector<double> scale_breakpoints(int k, double dmax) {
  std::vector<double> bps;
  const double kf = factorial(k);
  for (double d = 1.0; d <= 2.0 * dmax; d *= 2.0) bps.push_back(std::pow(kf / d, 1.0 / k));
  return bps;
}

double upper_limit(int k) { return 50.0 + 10.0 * k; }

}  // namespace

CutOutcome simulate_cut_process(const Tree& t, int k, Rng& rng, bool keep_per_vertex) {
  check_k(k);
  const auto n = t.size();
  AliveSet alive(n);
  std::vector<std::int32_t> cuts(n, 0);
  CutOutcome out;
  for (;;) {
    const auto v = alive.select(static_cast<std::int32_t>(rng.below(alive.count())));
    ++out.total_cuts;
    if (++cuts[v] < k) continue;
    if (v == 0) break;
    // Detach the subtree of v; parts removed earlier are skipped whole.
    const auto end = v + t.subtree_size(v);
    for (auto i = v; i < end;) {
      if (alive.alive(i)) {
        alive.remove(i);
        ++i;
      } else {
        i += t.subtree_size(i);
      }
    }
  }
  if (keep_per_vertex) out.per_vertex_cuts = std::move(cuts);
  return out;
}

RecordOutcome simulate_records(const Tree& t, int k, Rng& rng) {
  check_k(k);
  const auto n = t.size();
  RecordOutcome out;
  out.records_per_rank.assign(k, 0);
  // limit[v] = min over ancestors-or-self u of G_{k,u}, known exactly only when
  // below the parent's limit, which is all that the descendants need.
  std::vector<double> limit(n);
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (std::int32_t v = 0; v < n; ++v) {
    const double bound = v == 0 ? inf : limit[t.parent(v)];
    double s = 0.0;
    int r = 0;
    while (r < k) {
      s += rng.exponential();
      if (!(s < bound)) break;
      ++out.records_per_rank[r];
      ++r;
    }
    limit[v] = r == k ? s : bound;
  }
  return out;
}

std::vector<double> exact_mean_records_all(const Profile& p, int k) {
  check_k(k);
  if (p.counts.empty()) throw ParameterError("empty profile");
  const GammaTail g(k);
  const auto& w = p.counts;
  const auto depths = w.size();
  std::int64_t terms = 0, weight = 0;
  for (std::size_t i = 1; i < depths; ++i) {
    if (w[i] > 0) ++terms;
    weight += w[i];
  }
  std::vector<double> out(k, static_cast<double>(w[0]));
  if (weight == 0) return out;

  // Phi(x) = sum_{i>=1} w_i g(x)^i; powers are re-anchored with exp(i log g)
  // every 32 steps to keep rounding from accumulating.
  auto phi = [&](double x) {
    const double lg = g.log(x);
    const double gx = std::exp(lg);
    double sum = 0.0, power = 1.0;
    std::int64_t remaining = weight;
    for (std::size_t i = 1; i < depths; ++i) {
      power = (i % 32 == 0) ? std::exp(static_cast<double>(i) * lg) : power * gx;
      if (power < 1e-300) break;
      sum += static_cast<double>(w[i]) * power;
      remaining -= w[i];
      if (static_cast<double>(remaining) * power < 1e-17 * sum) break;
    }
    return sum;
  };
  QuadOptions opt;
  opt.abs_tol = 1e-10 * static_cast<double>(terms);
  opt.rel_tol = 1e-13;
  opt.max_intervals = 4000;
  opt.breakpoints = scale_breakpoints(k, static_cast<double>(depths));
  const auto res = integrate_vec(
      [&](double x, double* f) {
        const double ph = phi(x);
        for (int r = 1; r <= k; ++r) f[r - 1] = rank_density(r, x) * ph;
      },
      static_cast<std::size_t>(k), 0.0, upper_limit(k), opt);
  for (int r = 0; r < k; ++r) out[r] += res.value[r];
  return out;
}

double exact_mean_records(const Profile& p, int k, int r) {
  if (r < 1 || r > k) throw ParameterError("rank r must be in 1..k");
  return exact_mean_records_all(p, k)[r - 1];
}

double exact_second_moment_k1(const Tree& t, int k) {
  if (k < 2) throw ParameterError("exact second moment is not supported for k = 1");
  const auto n = t.size();
  if (n > 200) throw SizeError("exact second moment is limited to n <= 200, got " + std::to_string(n));
  const double mean = exact_mean_records(profile(t), k, 1);
  if (n == 1) return mean;

  // For an ordered pair (v1, v2) with clock values x1 > x2, both are
  // 1-records with probability density
  //   e^{-x1-x2} g(x1)^{n1} g(x2)^{n2}          (v2 not an ancestor of v1)
  //   e^{-x1-x2} g(x1)^{n1} Q(k-1, x1 - x2)     (v2 a strict ancestor of v1)
  // where n1 counts the ancestors that must outlast x1 and n2 the rest.
  std::map<std::int32_t, std::map<std::int32_t, double>> plain;  // n1 -> n2 -> count
  std::map<std::int32_t, double> nested;                          // n1 -> count
  auto lca_depth = [&](std::int32_t a, std::int32_t b) {
    while (!t.is_ancestor(a, b)) a = t.parent(a);
    return t.depth(a);
  };
  for (std::int32_t v1 = 0; v1 < n; ++v1)
    for (std::int32_t v2 = 0; v2 < n; ++v2) {
      if (v1 == v2) continue;
      if (t.is_ancestor(v2, v1))
        nested[t.depth(v1) - 1] += 1.0;
      else if (t.is_ancestor(v1, v2))
        plain[t.depth(v1)][t.depth(v2) - t.depth(v1) - 1] += 1.0;
      else
        plain[t.depth(v1)][t.depth(v2) - lca_depth(v1, v2) - 1] += 1.0;
    }

  std::vector<std::int32_t> inner_powers;
  for (const auto& [n1, row] : plain)
    for (const auto& [n2, c] : row) inner_powers.push_back(n2);
  std::sort(inner_powers.begin(), inner_powers.end());
  inner_powers.erase(std::unique(inner_powers.begin(), inner_powers.end()), inner_powers.end());
  const auto slots = inner_powers.size();
  std::map<std::int32_t, std::size_t> slot_of;
  for (std::size_t i = 0; i < slots; ++i) slot_of[inner_powers[i]] = i;
  const std::int32_t max_power = inner_powers.empty() ? 0 : inner_powers.back();

  const GammaTail g(k);
  const double kf = factorial(k);
  QuadOptions inner_opt;
  inner_opt.abs_tol = 1e-14;
  inner_opt.rel_tol = 1e-12;
  // Component `slots` holds the nested-pair integral over x2.
  auto inner = [&](double x1) {
    inner_opt.breakpoints.clear();
    for (double d = 1.0; d <= 2.0 * (max_power + 1); d *= 2.0) inner_opt.breakpoints.push_back(std::pow(kf / d, 1.0 / k));
    std::vector<double> scratch(max_power + 1);
    return integrate_vec(
               [&](double x2, double* f) {
                 const double e = std::exp(-x2);
                 const double gx = g(x2);
                 double power = 1.0;
                 std::size_t s = 0;
                 for (std::int32_t m = 0; m <= max_power; ++m) {
                   if (s < slots && inner_powers[s] == m) f[s++] = e * power;
                   power *= gx;
                 }
                 f[slots] = e * gamma_q(k - 1.0, x1 - x2);
               },
               slots + 1, 0.0, x1, inner_opt)
        .value;
  };
  auto outer = [&](double x1) {
    if (x1 <= 0.0) return 0.0;
    const auto in = inner(x1);
    const double gx = g(x1);
    double total = 0.0;
    for (const auto& [n1, row] : plain) {
      double acc = 0.0;
      for (const auto& [n2, c] : row) acc += c * in[slot_of[n2]];
      total += std::pow(gx, n1) * acc;
    }
    for (const auto& [n1, c] : nested) total += c * std::pow(gx, n1) * in[slots];
    return std::exp(-x1) * total;
  };
  QuadOptions opt;
  opt.abs_tol = 1e-9;
  opt.rel_tol = 1e-12;
  opt.breakpoints = scale_breakpoints(k, n);
  const double pairs = integrate(outer, 0.0, upper_limit(k), opt).value;
  return mean + 2.0 * pairs;
}

double gamma_tail_power_approx_error(int k, double D, double a) {
  check_k(k);
  if (!(a > 0.0)) throw ParameterError("a must be positive");
  if (D < 0.0) throw ParameterError("D must be >= 0");
  if (D == 0.0) return 0.0;
  const GammaTail g(k);
  const double kf = factorial(k);
  const double x0 = std::pow(a, 0.5 * (1.0 / k + 1.0 / (k + 1)));
  constexpr int grid = 4000;
  double worst = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = x0 * i / grid;
    const double e = std::fabs(std::expm1(D * g.log(x) + D * std::pow(x, k) / kf));
    worst = std::max(worst, e);
  }
  return worst;
}

}  // namespace kcut
