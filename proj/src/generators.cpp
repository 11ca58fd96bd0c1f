#include "kcut/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kcut/errors.hpp"

namespace kcut {
namespace {

constexpr std::int64_t kMaxVertices = INT32_MAX - 1;

std::int32_t checked_size(std::int64_t n, std::int64_t min = 1) {
  if (n < min) throw SizeError("tree size must be at least " + std::to_string(min) + ", got " + std::to_string(n));
  if (n > kMaxVertices) throw SizeError("tree size " + std::to_string(n) + " exceeds the vertex index range");
  return static_cast<std::int32_t>(n);
}

// Full d-ary tree of the given height: (d^{h+1} - 1)/(d - 1) vertices.
std::int64_t regular_size(int d, int height) {
  if (d < 2) throw ParameterError("regular tree degree must be >= 2");
  if (height < 0) throw ParameterError("regular tree height must be >= 0");
  std::int64_t level = 1, total = 1;
  for (int j = 1; j <= height; ++j) {
    if (level > (INT64_MAX / 4) / d) throw SizeError("regular tree size overflows");
    level *= d;
    total += level;
  }
  return total;
}

void shuffle(std::vector<std::int32_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// Preorder tree from an offspring sequence whose Lukasiewicz path is valid.
Tree tree_from_preorder_degrees(const std::vector<std::int32_t>& c) {
  const auto n = static_cast<std::int32_t>(c.size());
  std::vector<std::int32_t> parents(n, kNoParent);
  std::vector<std::pair<std::int32_t, std::int32_t>> stack{{0, c[0]}};
  for (std::int32_t i = 1; i < n; ++i) {
    while (stack.back().second == 0) stack.pop_back();
    parents[i] = stack.back().first;
    --stack.back().second;
    stack.push_back({i, c[i]});
  }
  return build_tree(parents);
}

// Cycle lemma: the unique rotation of c (sum n-1) with a valid
// Lukasiewicz path starts right after the first minimum of its partial sums.
std::vector<std::int32_t> rotate_to_tree(const std::vector<std::int32_t>& c) {
  const auto n = c.size();
  std::int64_t s = 0, best = INT64_MAX;
  std::size_t m = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    s += c[i - 1] - 1;
    if (s < best) {
      best = s;
      m = i;
    }
  }
  std::vector<std::int32_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = c[(m + i) % n];
  return out;
}

std::vector<std::int32_t> poisson_counts(std::int32_t n, Rng& rng) {
  // n-1 balls into n bins uniformly: i.i.d. Poisson(1) given the sum.
  std::vector<std::int32_t> c(n, 0);
  for (std::int32_t b = 0; b + 1 < n; ++b) ++c[rng.below(n)];
  return c;
}

std::vector<std::int32_t> geometric_counts(std::int32_t n, Rng& rng) {
  // Uniform weak composition of n-1 into n parts: choose which n-1 of the
  // 2n-2 symbols are balls (selection sampling), the rest are bin separators.
  std::vector<std::int32_t> c(n, 0);
  std::int64_t slots = 2 * static_cast<std::int64_t>(n) - 2;
  std::int64_t balls = n - 1;
  std::int32_t bin = 0;
  for (; slots > 0; --slots) {
    if (static_cast<std::int64_t>(rng.below(slots)) < balls) {
      ++c[bin];
      --balls;
    } else {
      ++bin;
    }
  }
  return c;
}

std::vector<std::int32_t> custom_counts(std::int32_t n, const OffspringDist& dist, Rng& rng) {
  const auto budget = static_cast<std::int64_t>(std::ceil(1e4 * std::sqrt(static_cast<double>(n))));
  const auto& p = dist.pmf;
  std::vector<std::int64_t> count(p.size());
  for (std::int64_t attempt = 0; attempt < budget; ++attempt) {
    // Multinomial(n, p) by sequential conditional binomials.
    std::int64_t left = n, sum = 0;
    double mass = 1.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (left == 0 || p[j] <= 0.0) {
        count[j] = 0;
        continue;
      }
      const double q = j + 1 == p.size() ? 1.0 : std::min(1.0, p[j] / mass);
      std::binomial_distribution<std::int64_t> bin(left, q);
      count[j] = q >= 1.0 ? left : bin(rng);
      left -= count[j];
      mass -= p[j];
      sum += static_cast<std::int64_t>(j) * count[j];
    }
    if (left != 0 || sum != n - 1) continue;
    std::vector<std::int32_t> c;
    c.reserve(n);
    for (std::size_t j = 0; j < p.size(); ++j) c.insert(c.end(), count[j], static_cast<std::int32_t>(j));
    shuffle(c, rng);
    return c;
  }
  throw RetryBudgetError("cgw sampler: no offspring sequence summing to n-1 after " + std::to_string(budget) +
                         " attempts (n=" + std::to_string(n) + ")");
}

}  // namespace

OffspringDist OffspringDist::poisson1() {
  OffspringDist d;
  d.kind = Kind::poisson1;
  return d;
}

OffspringDist OffspringDist::geometric_half() {
  OffspringDist d;
  d.kind = Kind::geometric_half;
  d.variance = 2.0;
  return d;
}

OffspringDist OffspringDist::custom(std::vector<double> pmf) {
  double total = 0.0, mean = 0.0, second = 0.0;
  int span = 0;
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    if (pmf[j] < 0.0 || !std::isfinite(pmf[j])) throw ParameterError("offspring pmf entries must be finite and >= 0");
    total += pmf[j];
    mean += j * pmf[j];
    second += static_cast<double>(j) * j * pmf[j];
    if (pmf[j] > 0.0) span = std::gcd(span, static_cast<int>(j));
  }
  if (std::fabs(total - 1.0) > 1e-12) throw ParameterError("offspring pmf must sum to 1, sums to " + std::to_string(total));
  if (std::fabs(mean - 1.0) > 1e-12) throw ParameterError("offspring mean must be 1, got " + std::to_string(mean));
  const double var = second - mean * mean;
  if (!(var > 1e-12)) throw ParameterError("offspring variance must be positive");
  while (!pmf.empty() && pmf.back() == 0.0) pmf.pop_back();
  OffspringDist d;
  d.kind = Kind::custom_pmf;
  d.pmf = std::move(pmf);
  d.mean = mean;
  d.variance = var;
  d.span = span;
  return d;
}

double OffspringDist::sigma() const { return std::sqrt(variance); }

std::string OffspringDist::name() const {
  switch (kind) {
    case Kind::poisson1: return "poisson1";
    case Kind::geometric_half: return "geometric_half";
    case Kind::custom_pmf: return "custom_pmf";
  }
  return "?";
}

std::string family_name(Family f) {
  switch (f) {
    case Family::path: return "path";
    case Family::complete_binary: return "complete_binary";
    case Family::complete_regular: return "complete_regular";
    case Family::mixture: return "mixture";
    case Family::cgw: return "cgw";
    case Family::recursive: return "recursive";
    case Family::preferential: return "preferential";
    case Family::bst: return "bst";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (auto f : {Family::path, Family::complete_binary, Family::complete_regular, Family::mixture, Family::cgw,
                 Family::recursive, Family::preferential, Family::bst})
    if (family_name(f) == name) return f;
  if (name == "binary") return Family::complete_binary;
  if (name == "regular") return Family::complete_regular;
  throw ConfigError("unknown family '" + name + "'");
}

bool is_deterministic(Family f) {
  return f == Family::path || f == Family::complete_binary || f == Family::complete_regular ||
         f == Family::mixture;
}

int binary_height(std::int64_t n) {
  int h = 0;
  while ((std::int64_t{2} << h) <= n) ++h;
  return h;
}

Tree gen_path(std::int64_t n) {
  const auto m = checked_size(n);
  std::vector<std::int32_t> parents(m);
  for (std::int32_t v = 0; v < m; ++v) parents[v] = v - 1;
  return build_tree(parents);
}

Tree gen_complete_binary(std::int64_t n) {
  const auto m = checked_size(n);
  // Heap numbering fills levels left to right.
  std::vector<std::int32_t> parents(m);
  parents[0] = kNoParent;
  for (std::int32_t v = 1; v < m; ++v) parents[v] = (v - 1) / 2;
  return build_tree(parents);
}

Tree gen_complete_regular(int d, int height) { return gen_mixture({{d, height}}); }

Tree gen_mixture(const std::vector<RegularComponent>& components) {
  if (components.empty()) throw ParameterError("mixture needs at least one component");
  std::int64_t total = 1;
  for (const auto& c : components) {
    if (c.d < 2) throw ParameterError("mixture degrees must be >= 2");
    if (c.height < 1 && components.size() > 1) throw ParameterError("mixture heights must be >= 1");
    total += regular_size(c.d, c.height) - 1;
    if (total > kMaxVertices) throw SizeError("mixture size " + std::to_string(total) + " overflows");
  }
  std::vector<std::int32_t> parents{kNoParent};
  parents.reserve(total);
  // Each component is laid out level by level; its root is the shared vertex 0.
  for (const auto& c : components) {
    std::int32_t level_begin = 0, level_end = 1;  // previous level, as indices into parents
    for (int j = 1; j <= c.height; ++j) {
      const auto next_begin = static_cast<std::int32_t>(parents.size());
      for (std::int32_t p = level_begin; p < level_end; ++p)
        for (int i = 0; i < c.d; ++i) parents.push_back(p);
      level_begin = next_begin;
      level_end = static_cast<std::int32_t>(parents.size());
    }
  }
  return build_tree(parents);
}

Tree gen_cgw(std::int64_t n, const OffspringDist& dist, Rng& rng) {
  const auto m = checked_size(n);
  if ((m - 1) % dist.span != 0)
    throw InfeasibleError("size " + std::to_string(n) + " is incompatible with offspring span " +
                          std::to_string(dist.span));
  if (m == 1) return build_tree({kNoParent});
  std::vector<std::int32_t> c;
  switch (dist.kind) {
    case OffspringDist::Kind::poisson1: c = poisson_counts(m, rng); break;
    case OffspringDist::Kind::geometric_half: c = geometric_counts(m, rng); break;
    case OffspringDist::Kind::custom_pmf: c = custom_counts(m, dist, rng); break;
  }
  return tree_from_preorder_degrees(rotate_to_tree(c));
}

Tree gen_recursive(std::int64_t n, Rng& rng) {
  const auto m = checked_size(n);
  std::vector<std::int32_t> parents(m);
  parents[0] = kNoParent;
  for (std::int32_t v = 1; v < m; ++v) parents[v] = static_cast<std::int32_t>(rng.below(v));
  return build_tree(parents);
}

Tree gen_preferential(std::int64_t n, double alpha, Rng& rng) {
  if (!(alpha > -1.0)) throw ParameterError("preferential attachment needs alpha > -1");
  const auto m = checked_size(n, 2);
  std::vector<std::int32_t> parents(m);
  parents[0] = kNoParent;
  parents[1] = 0;
  // Weight deg + alpha splits as (deg - 1) + (1 + alpha): the first part is
  // sampled from a list holding each vertex deg - 1 times, the second
  // uniformly over vertices.
  std::vector<std::int32_t> excess;
  excess.reserve(m);
  for (std::int32_t v = 2; v < m; ++v) {
    const double edges = v - 1;
    const double total = 2.0 * edges + alpha * v;
    std::int32_t target;
    if (!excess.empty() && rng.uniform() * total < static_cast<double>(excess.size()))
      target = excess[rng.below(excess.size())];
    else
      target = static_cast<std::int32_t>(rng.below(v));
    parents[v] = target;
    excess.push_back(target);
  }
  return build_tree(parents);
}

Tree gen_bst(std::int64_t n, Rng& rng) {
  const auto m = checked_size(n);
  // Keys 0..m-1 in order; priority = insertion time. The BST of an insertion
  // sequence is the Cartesian tree of the keys under those priorities.
  std::vector<std::int32_t> time(m);
  std::iota(time.begin(), time.end(), 0);
  shuffle(time, rng);
  std::vector<std::int32_t> parents(m, kNoParent), stack;
  stack.reserve(64);
  for (std::int32_t key = 0; key < m; ++key) {
    std::int32_t last = kNoParent;
    while (!stack.empty() && time[stack.back()] > time[key]) {
      last = stack.back();
      stack.pop_back();
    }
    if (last != kNoParent) parents[last] = key;   // left child
    if (!stack.empty()) parents[key] = stack.back();  // right child
    stack.push_back(key);
  }
  return build_tree(parents);
}

Tree generate(const FamilySpec& spec, Rng& rng) {
  switch (spec.family) {
    case Family::path: return gen_path(spec.n);
    case Family::complete_binary: return gen_complete_binary(spec.n);
    case Family::complete_regular: return gen_complete_regular(spec.regular.d, spec.regular.height);
    case Family::mixture: return gen_mixture(spec.components);
    case Family::cgw: return gen_cgw(spec.n, spec.offspring, rng);
    case Family::recursive: return gen_recursive(spec.n, rng);
    case Family::preferential: return gen_preferential(spec.n, spec.alpha, rng);
    case Family::bst: return gen_bst(spec.n, rng);
  }
  throw ConfigError("unknown family");
}

std::int64_t family_size(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::complete_regular: return regular_size(spec.regular.d, spec.regular.height);
    case Family::mixture: {
      std::int64_t total = 1;
      for (const auto& c : spec.components) total += regular_size(c.d, c.height) - 1;
      return total;
    }
    default: return spec.n;
  }
}

Profile deterministic_profile(const FamilySpec& spec) {
  Profile p;
  switch (spec.family) {
    case Family::path:
      if (spec.n < 1) throw SizeError("path size must be >= 1");
      p.counts.assign(static_cast<std::size_t>(spec.n), 1);
      break;
    case Family::complete_binary: {
      if (spec.n < 1) throw SizeError("binary tree size must be >= 1");
      const int h = binary_height(spec.n);
      for (int i = 0; i < h; ++i) p.counts.push_back(std::int64_t{1} << i);
      p.counts.push_back(spec.n - (std::int64_t{1} << h) + 1);
      break;
    }
    case Family::complete_regular:
    case Family::mixture: {
      const auto comps = spec.family == Family::mixture ? spec.components
                                                        : std::vector<RegularComponent>{spec.regular};
      if (comps.empty()) throw ParameterError("mixture needs at least one component");
      int hmax = 0;
      for (const auto& c : comps) {
        regular_size(c.d, c.height);  // validates and checks overflow
        hmax = std::max(hmax, c.height);
      }
      p.counts.assign(static_cast<std::size_t>(hmax) + 1, 0);
      p.counts[0] = 1;
      for (const auto& c : comps) {
        std::int64_t level = 1;
        for (int j = 1; j <= c.height; ++j) p.counts[j] += (level *= c.d);
      }
      break;
    }
    default:
      throw ConfigError("family '" + family_name(spec.family) + "' has no deterministic profile");
  }
  p.n = std::accumulate(p.counts.begin(), p.counts.end(), std::int64_t{0});
  return p;
}

}  // namespace kcut
