#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "kcut/errors.hpp"
#include "kcut/generators.hpp"
#include "kcut/rng.hpp"
#include "kcut/special.hpp"
#include "kcut/tree.hpp"
#include "support.hpp"

using namespace kcut;
using V = std::vector<std::int32_t>;
using V64 = std::vector<std::int64_t>;

namespace {

// Preorder degree sequence: identifies a plane tree.
std::string plane_shape(const Tree& t) {
  std::string s;
  for (std::int32_t v = 0; v < t.size(); ++v) s += static_cast<char>('0' + t.degree(v));
  return s;
}

// Canonical form of the unordered shape.
std::string free_shape(const Tree& t, std::int32_t v = 0) {
  std::vector<std::string> kids;
  for (auto c : t.children(v)) kids.push_back(free_shape(t, c));
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  for (const auto& k : kids) s += k;
  return s + ")";
}

// Pearson statistic and its chi-square survival probability.
double chi_square_p(const std::map<std::string, int>& counts, const std::map<std::string, double>& probs, int total) {
  double stat = 0.0;
  for (const auto& [shape, p] : probs) {
    const auto it = counts.find(shape);
    const double obs = it == counts.end() ? 0.0 : it->second;
    stat += (obs - total * p) * (obs - total * p) / (total * p);
  }
  for (const auto& [shape, c] : counts) REQUIRE_MESSAGE(probs.count(shape), "unexpected shape " << shape);
  const double df = static_cast<double>(probs.size()) - 1.0;
  return gamma_q(df / 2.0, stat / 2.0);
}

template <class Gen>
std::map<std::string, int> tally(int samples, std::uint64_t seed, Gen&& gen) {
  std::map<std::string, int> counts;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) ++counts[gen(rng)];
  return counts;
}

}  // namespace

TEST_CASE("paths") {
  CHECK(gen_path(1).size() == 1);
  CHECK(gen_path(3).depths() == V{0, 1, 2});
  const auto w = dfs_walk(gen_path(5)).values;
  CHECK(*std::max_element(w.begin(), w.end()) == 4);
  CHECK_THROWS_AS(gen_path(0), SizeError);
}

TEST_CASE("complete binary trees") {
  CHECK(profile(gen_complete_binary(7)).counts == V64{1, 2, 4});
  const Tree t = gen_complete_binary(4);
  CHECK(profile(t).counts == V64{1, 2, 1});
  // The single vertex on the last level is the leftmost child of the root's first child.
  CHECK(t.parent(2) == 1);
  CHECK(t.depth(2) == 2);
  const Tree full = gen_complete_binary((1 << 10) - 1);
  CHECK(full.max_depth() == 9);
  CHECK(binary_height((1 << 10) - 1) == 9);
  for (int i = 0; i <= 9; ++i) CHECK(profile(full).counts[i] == (1LL << i));
}

TEST_CASE("complete regular trees and mixtures") {
  CHECK(profile(gen_complete_regular(3, 2)).counts == V64{1, 3, 9});
  CHECK(profile(gen_mixture({{2, 3}})).counts == profile(gen_complete_binary(15)).counts);
  // 6 non-root vertices from (2, 2), 12 from (3, 2), one shared root.
  const Tree m = gen_mixture({{2, 2}, {3, 2}});
  CHECK(m.size() == 19);
  CHECK(m.degree(0) == 5);
  CHECK(profile(m).counts == V64{1, 5, 13});
  const Tree two = gen_mixture({{2, 1}, {2, 1}});
  CHECK(two.size() == 5);
  CHECK(two.degree(0) == 4);
  CHECK_THROWS_AS(gen_mixture({}), ParameterError);
  CHECK_THROWS_AS(gen_mixture({{1, 2}}), ParameterError);
  CHECK_THROWS_AS(gen_complete_regular(2, 200), SizeError);
}

TEST_CASE("deterministic profiles match the built trees") {
  std::vector<FamilySpec> specs(4);
  specs[0].family = Family::path;
  specs[0].n = 37;
  specs[1].family = Family::complete_binary;
  specs[1].n = 100;
  specs[2].family = Family::complete_regular;
  specs[2].regular = {4, 3};
  specs[3].family = Family::mixture;
  specs[3].components = {{2, 3}, {5, 2}, {3, 1}};
  Rng rng(1);
  for (const auto& s : specs) {
    const Tree t = generate(s, rng);
    CHECK(deterministic_profile(s).counts == profile(t).counts);
    CHECK(family_size(s) == t.size());
  }
  // Beyond the int32 vertex range, only the profile is available.
  FamilySpec big;
  big.family = Family::complete_binary;
  big.n = (std::int64_t{1} << 41) - 1;
  const auto p = deterministic_profile(big);
  CHECK(p.n == big.n);
  CHECK(p.counts.size() == 41);
  CHECK(p.counts.back() == (std::int64_t{1} << 40));
}

TEST_CASE("offspring laws") {
  CHECK(OffspringDist::poisson1().sigma() == 1.0);
  CHECK(OffspringDist::geometric_half().variance == doctest::Approx(2.0));
  const auto c = OffspringDist::custom({0.5, 0.0, 0.5});
  CHECK(c.span == 2);
  CHECK(c.variance == doctest::Approx(1.0));
  CHECK_THROWS_AS(OffspringDist::custom({0.5, 0.6}), ParameterError);
  CHECK_THROWS_AS(OffspringDist::custom({0.3, 0.3, 0.4}), ParameterError);
  CHECK_THROWS_AS(OffspringDist::custom({0.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(OffspringDist::custom({-0.1, 1.2, -0.1}), ParameterError);
}

TEST_CASE("cgw: plane-tree probabilities are uniform under geometric(1/2)") {
  // P(tree) = prod_v 2^{-(deg v + 1)} = 2^{-(2n - 1)} whatever the shape.
  for (const std::string s : {"200", "110", "3000", "2100", "2010", "1200", "1110"}) {
    int exponent = 0;
    for (char ch : s) exponent += (ch - '0') + 1;
    CHECK(exponent == 2 * static_cast<int>(s.size()) - 1);
  }
}

TEST_CASE("cgw(geometric_half) samples plane trees uniformly") {
  const auto geo = OffspringDist::geometric_half();
  auto c3 = tally(20000, 3, [&](Rng& r) { return plane_shape(gen_cgw(3, geo, r)); });
  CHECK(chi_square_p(c3, {{"200", 0.5}, {"110", 0.5}}, 20000) > 1e-3);
  auto c4 = tally(100000, 4, [&](Rng& r) { return plane_shape(gen_cgw(4, geo, r)); });
  const std::map<std::string, double> five{
      {"3000", 0.2}, {"2100", 0.2}, {"2010", 0.2}, {"1200", 0.2}, {"1110", 0.2}};
  CHECK(chi_square_p(c4, five, 100000) > 1e-3);
}

TEST_CASE("cgw: poisson and custom laws match the conditioned product weights") {
  // P(shape) is proportional to prod_v p(deg v) among plane trees with n = 4.
  auto weights = [](const std::vector<double>& p) {
    std::map<std::string, double> w;
    double total = 0.0;
    for (const std::string s : {"3000", "2100", "2010", "1200", "1110"}) {
      double x = 1.0;
      for (char ch : s) x *= static_cast<std::size_t>(ch - '0') < p.size() ? p[ch - '0'] : 0.0;
      if (x > 0.0) w[s] = x;
      total += x;
    }
    for (auto& [_, x] : w) x /= total;
    return w;
  };
  const double e = std::exp(-1.0);
  const std::vector<double> pois{e, e, e / 2, e / 6};
  auto cp = tally(60000, 8, [](Rng& r) { return plane_shape(gen_cgw(4, OffspringDist::poisson1(), r)); });
  CHECK(chi_square_p(cp, weights(pois), 60000) > 1e-3);
  const std::vector<double> cust{0.3, 0.45, 0.2, 0.05};
  const auto dist = OffspringDist::custom(cust);
  auto cc = tally(60000, 9, [&](Rng& r) { return plane_shape(gen_cgw(4, dist, r)); });
  CHECK(chi_square_p(cc, weights(cust), 60000) > 1e-3);
}

TEST_CASE("cgw sizes, spans and determinism") {
  Rng rng(2);
  CHECK(gen_cgw(1, OffspringDist::poisson1(), rng).size() == 1);
  for (std::int64_t n : {2, 10, 1000, 100000}) CHECK(gen_cgw(n, OffspringDist::poisson1(), rng).size() == n);
  const auto even = OffspringDist::custom({0.5, 0.0, 0.5});
  CHECK_THROWS_AS(gen_cgw(4, even, rng), InfeasibleError);
  const Tree t = gen_cgw(101, even, rng);
  for (std::int32_t v = 0; v < t.size(); ++v) CHECK(t.degree(v) % 2 == 0);
  Rng a(77), b(77);
  CHECK(gen_cgw(500, OffspringDist::geometric_half(), a).parents() ==
        gen_cgw(500, OffspringDist::geometric_half(), b).parents());
}

TEST_CASE("random recursive trees") {
  Rng rng(3);
  CHECK(gen_recursive(1, rng).size() == 1);
  CHECK(gen_recursive(2, rng).depths() == V{0, 1});
  auto c = tally(20000, 12, [](Rng& r) { return free_shape(gen_recursive(3, r)); });
  CHECK(chi_square_p(c, {{"(()())", 0.5}, {"((()))", 0.5}}, 20000) > 1e-3);
  const Tree big = gen_recursive(100000, rng);
  const double ratio = big.max_depth() / std::log(100000.0);
  CHECK(ratio > 2.0);
  CHECK(ratio < 4.0);
}

TEST_CASE("preferential attachment") {
  Rng rng(4);
  CHECK(gen_preferential(2, 0.0, rng).depths() == V{0, 1});
  CHECK_THROWS_AS(gen_preferential(5, -1.0, rng), ParameterError);
  CHECK_THROWS_AS(gen_preferential(1, 0.0, rng), SizeError);
  // n = 4 shapes, weight deg + alpha over total degrees:
  //   star (2+a)/(2(4+3a)), path (1+a)/(2(4+3a)), broom (2+a)/(2(4+3a)),
  //   cherry 3(1+a)/(2(4+3a)).
  for (double a : {0.0, 1.5, -0.5}) {
    const double z = 2.0 * (4.0 + 3.0 * a);
    const std::map<std::string, double> law{{"(()()())", (2 + a) / z},
                                             {"(((())))", (1 + a) / z},
                                             {"((()()))", (2 + a) / z},
                                             {"((())())", 3 * (1 + a) / z}};
    auto c = tally(60000, 20, [&](Rng& r) { return free_shape(gen_preferential(4, a, r)); });
    INFO("alpha = " << a);
    CHECK(chi_square_p(c, law, 60000) > 1e-3);
  }
  // Large alpha approaches uniform attachment: n = 3 is a star or a path with probability 1/2.
  auto c3 = tally(20000, 21, [](Rng& r) { return free_shape(gen_preferential(3, 1e6, r)); });
  CHECK(chi_square_p(c3, {{"(()())", 0.5}, {"((()))", 0.5}}, 20000) > 1e-3);
}

TEST_CASE("binary search trees") {
  Rng rng(6);
  CHECK(gen_bst(1, rng).size() == 1);
  const int samples = 60000;
  auto c = tally(samples, 31, [](Rng& r) { return free_shape(gen_bst(3, r)); });
  const double p_path = static_cast<double>(c["((()))"]) / samples;
  CHECK_WITHIN_SIGMA(p_path, 4.0 / 6.0, std::sqrt(p_path * (1 - p_path) / samples), 3.0);
  CHECK(c["(()())"] + c["((()))"] == samples);
  // Every vertex has at most two children, and in-order keys form a valid BST.
  const Tree t = gen_bst(10000, rng);
  for (std::int32_t v = 0; v < t.size(); ++v) CHECK(t.degree(v) <= 2);
  double depth_sum = 0.0;
  for (auto d : t.depths()) depth_sum += d;
  const double ratio = depth_sum / t.size() / std::log(10000.0);
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.4);
}

TEST_CASE("every random generator is a pure function of its seed") {
  for (Family f : {Family::cgw, Family::recursive, Family::preferential, Family::bst}) {
    FamilySpec s;
    s.family = f;
    s.n = 300;
    s.alpha = 0.5;
    Rng a(123), b(123), c(124);
    const auto ta = generate(s, a), tb = generate(s, b), tc = generate(s, c);
    CHECK(ta.parents() == tb.parents());
    CHECK(ta.parents() != tc.parents());
  }
}

TEST_CASE("family names") {
  CHECK(parse_family("binary") == Family::complete_binary);
  CHECK(parse_family(family_name(Family::bst)) == Family::bst);
  CHECK_THROWS_AS(parse_family("trie"), ConfigError);
  CHECK(is_deterministic(Family::mixture));
  CHECK_FALSE(is_deterministic(Family::cgw));
}
