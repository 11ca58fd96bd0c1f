#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "kcut/errors.hpp"

namespace kcut {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_intervals = 2000;
  // Interior points where the integrand changes scale; sorted internally.
  std::vector<double> breakpoints;
  bool throw_on_failure = true;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// 21-point Kronrod rule with its embedded 10-point Gauss rule (QUADPACK dqk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b;
  double value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

inline double qk_error(double resk, double resg, double resasc, double resabs, double half) {
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  return std::max(err, floor);
}

template <class F>
Segment gk21(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, 21> fv;
  fv[10] = f(c);
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    fv[j] = f(c - dx);
    fv[20 - j] = f(c + dx);
  }
  double resk = kWgk[10] * fv[10];
  double resabs = std::fabs(resk);
  double resg = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double pair = fv[j] + fv[20 - j];
    resk += kWgk[j] * pair;
    resabs += kWgk[j] * (std::fabs(fv[j]) + std::fabs(fv[20 - j]));
    if (j % 2 == 1) resg += kWg[j / 2] * pair;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::fabs(fv[10] - mean);
  for (int j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[20 - j] - mean));
  return {a, b, resk * h, qk_error(resk, resg, resasc * std::fabs(h), resabs * std::fabs(h), h)};
}

inline std::vector<double> partition(double a, double b, const std::vector<double>& bps) {
  std::vector<double> pts{a};
  std::vector<double> inner;
  for (double p : bps)
    if (p > a && p < b) inner.push_back(p);
  std::sort(inner.begin(), inner.end());
  for (double p : inner)
    if (p > pts.back()) pts.push_back(p);
  pts.push_back(b);
  return pts;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b]; the
/// interval with the largest error estimate is bisected until the total
/// error meets max(abs_tol, rel_tol * |value|).
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Segment> heap;
  double value = 0.0, error = 0.0;
  const auto pts = detail::partition(a, b, opt.breakpoints);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    auto s = detail::gk21(f, pts[i], pts[i + 1]);
    value += s.value;
    error += s.error;
    heap.push(s);
  }
  int count = static_cast<int>(heap.size());
  bool met = false;
  for (;;) {
    if (error <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(value))) {
      met = true;
      break;
    }
    if (count >= opt.max_intervals) break;
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
    heap.pop();
    auto l = detail::gk21(f, worst.a, mid);
    auto r = detail::gk21(f, mid, worst.b);
    value += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // Re-sum to shed the drift of the running totals.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.abs_error = error;
  out.intervals = count;
  out.converged = met || error <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(value));
  if (!out.converged && opt.throw_on_failure)
    throw NumericError("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                       "] stopped at error " + std::to_string(error) + " after " +
                       std::to_string(count) + " intervals");
  return out;
}

struct VecQuadResult {
  std::vector<double> value;
  double abs_error = 0.0;  // largest component error
  int intervals = 0;
  bool converged = false;
};

/// Vector-valued variant: f(x, out) fills out[0..dim) and every component
/// shares one mesh. A component is converged when its error is within
/// max(abs_tol, rel_tol * |value|).
template <class F>
VecQuadResult integrate_vec(F&& f, std::size_t dim, double a, double b, const QuadOptions& opt = {}) {
  struct Seg {
    double a, b, worst;
    std::vector<double> value, error;
  };
  std::vector<double> buf(dim);
  std::vector<std::array<double, 21>> fv(dim);
  auto rule = [&](double lo, double hi) {
    Seg s{lo, hi, 0.0, std::vector<double>(dim), std::vector<double>(dim)};
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    auto eval = [&](int slot, double x) {
      f(x, buf.data());
      for (std::size_t d = 0; d < dim; ++d) fv[d][slot] = buf[d];
    };
    eval(10, c);
    for (int j = 0; j < 10; ++j) {
      eval(j, c - h * detail::kXgk[j]);
      eval(20 - j, c + h * detail::kXgk[j]);
    }
    for (std::size_t d = 0; d < dim; ++d) {
      const auto& v = fv[d];
      double resk = detail::kWgk[10] * v[10], resabs = std::fabs(resk), resg = 0.0;
      for (int j = 0; j < 10; ++j) {
        const double pair = v[j] + v[20 - j];
        resk += detail::kWgk[j] * pair;
        resabs += detail::kWgk[j] * (std::fabs(v[j]) + std::fabs(v[20 - j]));
        if (j % 2 == 1) resg += detail::kWg[j / 2] * pair;
      }
      const double mean = 0.5 * resk;
      double resasc = detail::kWgk[10] * std::fabs(v[10] - mean);
      for (int j = 0; j < 10; ++j)
        resasc += detail::kWgk[j] * (std::fabs(v[j] - mean) + std::fabs(v[20 - j] - mean));
      s.value[d] = resk * h;
      s.error[d] = detail::qk_error(resk, resg, resasc * std::fabs(h), resabs * std::fabs(h), h);
    }
    return s;
  };
  std::vector<Seg> segs;
  const auto pts = detail::partition(a, b, opt.breakpoints);
  for (size_t i = 1; i < pts.size(); ++i) segs.push_back(rule(pts[i - 1], pts[i]));
  VecQuadResult out;
  out.value.assign(dim, 0.0);
  std::vector<double> tot(dim), err(dim);
  auto totals = [&] {
    std::fill(tot.begin(), tot.end(), 0.0);
    std::fill(err.begin(), err.end(), 0.0);
    for (const auto& s : segs)
      for (std::size_t d = 0; d < dim; ++d) {
        tot[d] += s.value[d];
        err[d] += s.error[d];
      }
  };
  auto excess = [&](std::size_t d) { return err[d] / std::max(opt.abs_tol, opt.rel_tol * std::fabs(tot[d])); };
  for (;;) {
    totals();
    double worst_ratio = 0.0;
    for (std::size_t d = 0; d < dim; ++d) worst_ratio = std::max(worst_ratio, excess(d));
    if (worst_ratio <= 1.0 || static_cast<int>(segs.size()) >= opt.max_intervals) break;
    // Bisect the segment contributing most to the out-of-tolerance components.
    std::size_t pick = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      double score = 0.0;
      for (std::size_t d = 0; d < dim; ++d)
        if (excess(d) > 1.0) score = std::max(score, segs[i].error[d] / std::max(opt.abs_tol, opt.rel_tol * std::fabs(tot[d])));
      if (score > best) {
        best = score;
        pick = i;
      }
    }
    const double lo = segs[pick].a, hi = segs[pick].b, mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    segs[pick] = rule(lo, mid);
    segs.push_back(rule(mid, hi));
  }
  totals();
  out.value = tot;
  out.intervals = static_cast<int>(segs.size());
  out.converged = true;
  for (std::size_t d = 0; d < dim; ++d) {
    out.abs_error = std::max(out.abs_error, err[d]);
    if (excess(d) > 1.0) out.converged = false;
  }
  if (!out.converged && opt.throw_on_failure)
    throw NumericError("vector quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                       "] did not converge after " + std::to_string(out.intervals) + " intervals");
  return out;
}

}  // namespace kcut
