#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "kcut/cutting.hpp"
#include "kcut/errors.hpp"
#include "kcut/generators.hpp"
#include "kcut/rng.hpp"
#include "kcut/special.hpp"
#include "kcut/tree.hpp"
#include "support.hpp"

using namespace kcut;
using kcut::testing::summarize;

namespace {

Tree star(int n) {
  std::vector<std::int32_t> p(n, 0);
  p[0] = kNoParent;
  return build_tree(p);
}

std::vector<double> process_totals(const Tree& t, int k, int reps, std::uint64_t seed) {
  std::vector<double> out;
  Rng rng(seed);
  for (int i = 0; i < reps; ++i) out.push_back(static_cast<double>(simulate_cut_process(t, k, rng).total_cuts));
  return out;
}

// Per-rank record counts (index 0 is the total, then K_1..K_k).
std::vector<std::vector<double>> record_counts(const Tree& t, int k, int reps, std::uint64_t seed) {
  std::vector<std::vector<double>> out(k + 1);
  Rng rng(seed);
  for (int i = 0; i < reps; ++i) {
    const auto r = simulate_records(t, k, rng);
    out[0].push_back(static_cast<double>(r.total()));
    for (int j = 0; j < k; ++j) out[j + 1].push_back(static_cast<double>(r.records_per_rank[j]));
  }
  return out;
}

}  // namespace

TEST_CASE("single vertex needs exactly k cuts and is an r-record for every r") {
  const Tree one = build_tree({kNoParent});
  Rng rng(1);
  for (int k = 1; k <= 4; ++k) {
    CHECK(simulate_cut_process(one, k, rng).total_cuts == k);
    CHECK(simulate_records(one, k, rng).records_per_rank == std::vector<std::int64_t>(k, 1));
    for (int r = 1; r <= k; ++r) CHECK(exact_mean_records(profile(one), k, r) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("two-vertex path: cut process means") {
  const Tree p2 = gen_path(2);
  const auto k1 = summarize(process_totals(p2, 1, 200000, 2));
  CHECK_WITHIN_SIGMA(k1.mean, 1.5, k1.stderr_, 3.0);
  const auto k2 = summarize(process_totals(p2, 2, 200000, 3));
  CHECK_WITHIN_SIGMA(k2.mean, 3.25, k2.stderr_, 3.0);
}

TEST_CASE("two-vertex path: record means, simulated and exact") {
  const Tree p2 = gen_path(2);
  const auto r1 = record_counts(p2, 1, 200000, 4);
  CHECK_WITHIN_SIGMA(summarize(r1[1]).mean, 1.5, summarize(r1[1]).stderr_, 3.0);
  const auto r2 = record_counts(p2, 2, 200000, 5);
  CHECK_WITHIN_SIGMA(summarize(r2[1]).mean, 1.75, summarize(r2[1]).stderr_, 3.0);
  CHECK_WITHIN_SIGMA(summarize(r2[2]).mean, 1.5, summarize(r2[2]).stderr_, 3.0);
  const auto pr = profile(p2);
  CHECK(std::fabs(exact_mean_records(pr, 2, 1) - 1.75) < 1e-10);
  CHECK(std::fabs(exact_mean_records(pr, 2, 2) - 1.5) < 1e-10);
  CHECK(std::fabs(exact_mean_records(pr, 1, 1) - 1.5) < 1e-10);
  CHECK_THROWS_AS(exact_mean_records(pr, 2, 3), ParameterError);
}

TEST_CASE("process and records totals have the same law") {
  // Two-sample chi-square on the histogram of the total cut count.
  const Tree t = gen_path(3);
  const int reps = 100000;
  std::map<int, std::pair<int, int>> hist;
  for (double x : process_totals(t, 2, reps, 6)) ++hist[static_cast<int>(x)].first;
  const auto rec = record_counts(t, 2, reps, 7);
  for (double x : rec[0]) ++hist[static_cast<int>(x)].second;
  double stat = 0.0;
  int cells = 0;
  for (const auto& [_, c] : hist) {
    const double a = c.first, b = c.second;
    if (a + b < 10) continue;
    stat += (a - b) * (a - b) / (a + b);
    ++cells;
  }
  CHECK(gamma_q((cells - 1) / 2.0, stat / 2.0) > 1e-3);
}

TEST_CASE("process and records means agree on assorted trees") {
  Rng gen(8);
  const std::vector<Tree> trees{gen_path(10), gen_complete_binary(15), gen_cgw(30, OffspringDist::poisson1(), gen),
                                gen_recursive(25, gen)};
  for (const auto& t : trees)
    for (int k : {2, 3}) {
      const auto p = summarize(process_totals(t, k, 20000, 9 + k));
      const auto rec = record_counts(t, k, 20000, 19 + k);
      const auto r = summarize(rec[0]);
      INFO("n=" << t.size() << " k=" << k);
      CHECK_WITHIN_SIGMA(p.mean, r.mean, std::hypot(p.stderr_, r.stderr_), 3.5);
    }
}

TEST_CASE("exact means match simulated records on a random tree") {
  Rng gen(10);
  const Tree t = gen_cgw(60, OffspringDist::geometric_half(), gen);
  const auto exact = exact_mean_records_all(profile(t), 3);
  const auto sim = record_counts(t, 3, 50000, 11);
  for (int r = 1; r <= 3; ++r) {
    CHECK(exact[r - 1] == doctest::Approx(exact_mean_records(profile(t), 3, r)).epsilon(1e-12));
    CHECK_WITHIN_SIGMA(summarize(sim[r]).mean, exact[r - 1], summarize(sim[r]).stderr_, 3.5);
  }
  // K_1 >= K_2 >= ... pathwise.
  for (std::size_t i = 0; i < sim[1].size(); ++i) CHECK(sim[1][i] >= sim[2][i]);
}

TEST_CASE("per-vertex cuts") {
  Rng rng(12);
  const Tree t = gen_recursive(40, rng);
  for (int rep = 0; rep < 50; ++rep) {
    const auto out = simulate_cut_process(t, 3, rng, true);
    REQUIRE(out.per_vertex_cuts);
    std::int64_t s = 0;
    for (auto c : *out.per_vertex_cuts) {
      CHECK(c >= 0);
      CHECK(c <= 3);
      s += c;
    }
    CHECK(s == out.total_cuts);
    CHECK((*out.per_vertex_cuts)[0] == 3);
  }
  CHECK_FALSE(simulate_cut_process(t, 3, rng).per_vertex_cuts);
}

TEST_CASE("same seed, same outcome") {
  Rng g(13);
  const Tree t = gen_recursive(200, g);
  Rng a(99), b(99);
  CHECK(simulate_cut_process(t, 2, a).total_cuts == simulate_cut_process(t, 2, b).total_cuts);
  CHECK(simulate_records(t, 3, a).records_per_rank == simulate_records(t, 3, b).records_per_rank);
}

TEST_CASE("exact second moment of K_1") {
  CHECK(exact_second_moment_k1(build_tree({kNoParent}), 2) == doctest::Approx(1.0));
  // K_1 = 1 + X, X ~ Bernoulli(3/4).
  CHECK(std::fabs(exact_second_moment_k1(gen_path(2), 2) - 3.25) < 1e-9);
  // Two leaves: 1 + 3 * 3/2 + 2 E[(1 - e^{-G})^2] with G ~ Gamma(2): 121/18.
  CHECK(std::fabs(exact_second_moment_k1(star(3), 2) - 121.0 / 18.0) < 1e-9);
  for (const Tree& t : {gen_path(3), star(4), gen_complete_binary(7)}) {
    const auto rec = record_counts(t, 2, 100000, 14);
    const auto& k1 = rec[1];
    std::vector<double> sq;
    for (double x : k1) sq.push_back(x * x);
    const auto s = summarize(sq);
    CHECK_WITHIN_SIGMA(s.mean, exact_second_moment_k1(t, 2), s.stderr_, 3.5);
  }
  CHECK_THROWS_AS(exact_second_moment_k1(gen_path(3), 1), ParameterError);
  CHECK_THROWS_AS(exact_second_moment_k1(gen_path(201), 2), SizeError);
}

TEST_CASE("gamma tail power approximation error") {
  CHECK(gamma_tail_power_approx_error(2, 0.0, 0.01) == 0.0);
  const double e2 = gamma_tail_power_approx_error(2, 1e2, 1e-2);
  const double e4 = gamma_tail_power_approx_error(2, 1e4, 1e-4);
  CHECK(e2 <= 1.0);
  CHECK(e4 < e2);
  CHECK(gamma_tail_power_approx_error(2, 1e6, 1e-6) < e4);
}

TEST_CASE("records scale to a million vertices") {
  Rng rng(15);
  const Tree t = gen_path(1000000);
  const auto r = simulate_records(t, 2, rng);
  CHECK(r.records_per_rank[0] >= r.records_per_rank[1]);
  CHECK(r.total() > 0);
}
