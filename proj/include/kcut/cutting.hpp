#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kcut/rng.hpp"
#include "kcut/tree.hpp"

namespace kcut {

struct CutOutcome {
  std::int64_t total_cuts = 0;
  // Cuts received by each vertex when the process stopped (optional).
  std::optional<std::vector<std::int32_t>> per_vertex_cuts;
};

struct RecordOutcome {
  std::vector<std::int64_t> records_per_rank;  // entry r-1 counts r-records

  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto c : records_per_rank) s += c;
    return s;
  }
};

/// The cutting procedure itself: cut a uniform vertex of the root
/// component; a vertex is removed, with the subtree below it, at its k-th cut.
CutOutcome simulate_cut_process(const Tree& t, int k, Rng& rng, bool keep_per_vertex = false);

/// Gamma-clock record model.
RecordOutcome simulate_records(const Tree& t, int k, Rng& rng);

/// E[K_r | T] for one rank, 1 <= r <= k.
double exact_mean_records(const Profile& p, int k, int r);

/// E[K_r | T] for r = 1..k (shares the profile sum across ranks).
std::vector<double> exact_mean_records_all(const Profile& p, int k);

/// E[K_1^2 | T]; k >= 2 and n <= 200.
double exact_second_moment_k1(const Tree& t, int k);

/// sup over x in [0, a^{(1/k + 1/(k+1))/2}] of |g(x)^D / exp(-D x^k / k!) - 1|.
double gamma_tail_power_approx_error(int k, double D, double a);

}  // namespace kcut
