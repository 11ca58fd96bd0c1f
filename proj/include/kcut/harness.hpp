#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcut/generators.hpp"

namespace kcut {

enum class Mode { process, records, exact_profile };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);

struct ExperimentConfig {
  FamilySpec family;
  int k = 2;
  // Exactly one size axis is used: sizes (vertex counts), heights (binary
  // and regular families) or scales (mixture: every component height is
  // multiplied by the scale).
  std::vector<std::int64_t> sizes;
  std::vector<int> heights;
  std::vector<int> scales;
  std::int64_t replicates = 100;
  Mode mode = Mode::records;
  std::uint64_t seed = 1;
  std::string scaling = "auto";
  std::string out;
  bool second_moment = false;
  int threads = 0;  // 0: KCUT_THREADS or hardware concurrency
};

/// Short label such as "cgw(poisson1)" or "mixture(2^2;3^2)".
std::string family_label(const FamilySpec& f);

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
/// Checks the config invariants; throws ConfigError.
void validate(const ExperimentConfig& cfg);

/// The family spec for size index i of the sweep, with its vertex count.
FamilySpec spec_at(const ExperimentConfig& cfg, std::size_t i);
std::size_t sweep_length(const ExperimentConfig& cfg);

struct MomentEstimate {
  std::int64_t count = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double m2 = 0.0;  // raw second moment
  double m4 = 0.0;  // raw fourth moment
  double scaled_mean = 0.0;
};

/// Moments of samples, summed in index order.
MomentEstimate estimate(const std::vector<double>& samples);

/// Scaling and limit constants of one family and k.
struct LimitSpec {
  Family family = Family::path;
  std::string scaling;  // cgw | path | log-height | none
  int k = 2;
  double sigma = 1.0;                  // cgw
  double log_base_scale = 1.0;         // a_n = 1 / (c ln n): c = 1/ln 2 (binary), 2 (bst), beta (pa)
  std::vector<double> zeta_atoms{1.0};
  std::vector<double> zeta_weights{1.0};
  bool conjectural = false;            // preferential attachment with alpha != 0

  /// Multiplier applied to the raw mean of `stat` at size n.
  double scale(std::int64_t n, const std::string& stat) const;
  /// Limit of the scaled mean; NaN when the theory gives none.
  double limit(const std::string& stat) const;
};

LimitSpec make_limit_spec(const FamilySpec& family, int k, const std::string& scaling);

struct Row {
  std::string family;
  int k = 0;
  std::int64_t n = 0;
  std::string mode;
  std::string stat;
  double mean = 0.0, stderr_ = 0.0, scaled_mean = 0.0, limit_value = 0.0, rel_dev = 0.0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  double scaled_stderr = 0.0;
  std::string note;
};

struct ExperimentResult {
  std::vector<Row> rows;
  bool partial_failure = false;
};

/// Runs the sweep; results do not depend on `threads`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 0);

int default_threads();

inline constexpr const char* kCsvVersionLine = "# kcut-experiment-csv v1";
void write_csv(std::ostream& os, const std::vector<Row>& rows);
std::vector<Row> read_csv(std::istream& is);

struct StatReport {
  std::string stat;
  std::vector<std::int64_t> n;
  std::vector<double> rel_dev;
  bool has_limit = false;
  bool abs_dev_decreasing = false;  // |rel_dev| strictly decreasing in n
  bool one_sided = false;           // every rel_dev has the same sign
};

struct Report {
  std::vector<StatReport> stats;
  bool conjectural = false;
};

/// Rescales rows per `spec`, attaches limits and trend verdicts.
Report compare_to_limit(const std::vector<Row>& rows, const LimitSpec& spec);

}  // namespace kcut
