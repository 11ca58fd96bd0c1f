#include "kcut/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "kcut/cutting.hpp"
#include "kcut/errors.hpp"
#include "kcut/limits.hpp"

namespace kcut {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> kConfigKeys = {"family", "k",     "sizes",   "heights", "scales",        "replicates",
                                           "mode",   "seed",  "scaling", "out",     "second_moment", "threads"};
const std::set<std::string> kFamilyKeys = {"name", "offspring", "pmf", "alpha", "d", "components"};

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

FamilySpec parse_family_spec(const json& j) {
  FamilySpec f;
  if (j.is_string()) {
    f.family = parse_family(j.get<std::string>());
    return f;
  }
  if (!j.is_object()) throw ConfigError("family must be a name or an object");
  for (const auto& [key, _] : j.items())
    if (!kFamilyKeys.count(key)) throw ConfigError("unknown family field '" + key + "'");
  f.family = parse_family(get<std::string>(j, "name"));
  if (j.contains("alpha")) f.alpha = get<double>(j, "alpha");
  if (j.contains("d")) f.regular.d = get<int>(j, "d");
  if (j.contains("components")) {
    for (const auto& c : j.at("components")) {
      if (!c.is_array() || c.size() != 2) throw ConfigError("mixture components are [d, height] pairs");
      f.components.push_back({c[0].get<int>(), c[1].get<int>()});
    }
  }
  if (j.contains("pmf")) {
    f.offspring = OffspringDist::custom(get<std::vector<double>>(j, "pmf"));
  } else if (j.contains("offspring")) {
    const auto& o = j.at("offspring");
    if (o.is_object()) {
      f.offspring = OffspringDist::custom(get<std::vector<double>>(o, "pmf"));
    } else {
      const auto name = o.get<std::string>();
      if (name == "poisson1")
        f.offspring = OffspringDist::poisson1();
      else if (name == "geometric_half")
        f.offspring = OffspringDist::geometric_half();
      else
        throw ConfigError("unknown offspring law '" + name + "'");
    }
  }
  return f;
}

}  // namespace

std::string family_label(const FamilySpec& f) {
  std::ostringstream os;
  os << family_name(f.family);
  switch (f.family) {
    case Family::cgw: os << "(" << f.offspring.name() << ")"; break;
    case Family::complete_regular: os << "(d=" << f.regular.d << ")"; break;
    case Family::preferential: os << "(alpha=" << f.alpha << ")"; break;
    case Family::mixture: {
      os << "(";
      for (std::size_t i = 0; i < f.components.size(); ++i)
        os << (i ? ";" : "") << f.components[i].d << "^" << f.components[i].height;
      os << ")";
      break;
    }
    default: break;
  }
  return os.str();
}

namespace {

// Rank of a stat name: 0 for K, r for K_r, -1 for K_1^2.
int stat_rank(const std::string& stat) {
  if (stat == "K") return 0;
  if (stat == "K_1^2") return -1;
  if (stat.size() > 2 && stat.rfind("K_", 0) == 0) return std::stoi(stat.substr(2));
  throw ConfigError("unknown statistic '" + stat + "'");
}

std::vector<std::string> stat_names(const ExperimentConfig& cfg) {
  std::vector<std::string> out{"K"};
  if (cfg.mode == Mode::process) return out;
  for (int r = 1; r <= cfg.k; ++r) out.push_back("K_" + std::to_string(r));
  if (cfg.second_moment) out.push_back("K_1^2");
  return out;
}

std::string sanitize(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::process: return "process";
    case Mode::records: return "records";
    case Mode::exact_profile: return "exact-profile";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "process") return Mode::process;
  if (s == "records") return Mode::records;
  if (s == "exact-profile" || s == "exact_profile") return Mode::exact_profile;
  throw ConfigError("unknown mode '" + s + "'");
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kConfigKeys.count(key)) throw ConfigError("unknown config field '" + key + "'");
  ExperimentConfig c;
  if (!j.contains("family")) throw ConfigError("config needs a family");
  c.family = parse_family_spec(j.at("family"));
  if (j.contains("k")) c.k = get<int>(j, "k");
  if (j.contains("sizes")) c.sizes = get<std::vector<std::int64_t>>(j, "sizes");
  if (j.contains("heights")) c.heights = get<std::vector<int>>(j, "heights");
  if (j.contains("scales")) c.scales = get<std::vector<int>>(j, "scales");
  if (j.contains("replicates")) c.replicates = get<std::int64_t>(j, "replicates");
  if (j.contains("mode")) c.mode = parse_mode(get<std::string>(j, "mode"));
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("scaling")) c.scaling = get<std::string>(j, "scaling");
  if (j.contains("out")) c.out = get<std::string>(j, "out");
  if (j.contains("second_moment")) c.second_moment = get<bool>(j, "second_moment");
  if (j.contains("threads")) c.threads = get<int>(j, "threads");
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  if (c.k < 1) throw ConfigError("k must be >= 1");
  if (c.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");
  const int axes = !c.sizes.empty() + !c.heights.empty() + !c.scales.empty();
  if (axes > 1) throw ConfigError("use one of sizes, heights or scales");
  auto increasing = [](const auto& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  };
  if (!increasing(c.sizes) || !increasing(c.heights) || !increasing(c.scales))
    throw ConfigError("sizes must be strictly increasing");
  switch (c.family.family) {
    case Family::complete_regular:
      if (c.heights.empty()) throw ConfigError("complete_regular needs heights");
      break;
    case Family::mixture:
      if (c.family.components.empty()) throw ConfigError("mixture needs components");
      if (!c.sizes.empty() || !c.heights.empty()) throw ConfigError("mixture sweeps use scales");
      break;
    case Family::complete_binary:
      if (c.sizes.empty() && c.heights.empty()) throw ConfigError("complete_binary needs sizes or heights");
      break;
    default:
      if (c.sizes.empty()) throw ConfigError(family_name(c.family.family) + " needs sizes");
  }
  if (c.family.family == Family::preferential && !(c.family.alpha > -1.0))
    throw ConfigError("preferential attachment needs alpha > -1");
  make_limit_spec(c.family, c.k, c.scaling);  // rejects bad pairings
}

std::size_t sweep_length(const ExperimentConfig& c) {
  if (!c.sizes.empty()) return c.sizes.size();
  if (!c.heights.empty()) return c.heights.size();
  if (!c.scales.empty()) return c.scales.size();
  return c.family.family == Family::mixture ? 1 : 0;
}

FamilySpec spec_at(const ExperimentConfig& c, std::size_t i) {
  FamilySpec f = c.family;
  if (!c.sizes.empty()) {
    f.n = c.sizes[i];
  } else if (!c.heights.empty()) {
    if (f.family == Family::complete_regular) {
      f.regular.height = c.heights[i];
    } else {
      if (c.heights[i] < 0 || c.heights[i] > 61) throw SizeError("binary height out of range");
      f.n = (std::int64_t{2} << c.heights[i]) - 1;
    }
  } else if (!c.scales.empty()) {
    for (auto& comp : f.components) comp.height *= c.scales[i];
  }
  f.n = family_size(f);
  return f;
}

MomentEstimate estimate(const std::vector<double>& x) {
  MomentEstimate m;
  m.count = static_cast<std::int64_t>(x.size());
  if (x.empty()) return m;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (double v : x) {
    s += v;
    s2 += v * v;
    s4 += v * v * v * v;
  }
  const double n = static_cast<double>(x.size());
  m.mean = s / n;
  m.m2 = s2 / n;
  m.m4 = s4 / n;
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return m;
}

// ------------------------------------------------------------- limits

LimitSpec make_limit_spec(const FamilySpec& family, int k, const std::string& scaling) {
  LimitSpec s;
  s.family = family.family;
  s.k = k;
  std::string sc = scaling;
  const bool log_height = family.family != Family::cgw && family.family != Family::path;
  if (sc == "auto") sc = family.family == Family::cgw ? "cgw" : family.family == Family::path ? "path" : "log-height";
  const bool ok = sc == "none" || (sc == "cgw" && family.family == Family::cgw) ||
                  (sc == "path" && family.family == Family::path) || (sc == "log-height" && log_height);
  if (!ok) throw ConfigError("scaling '" + scaling + "' does not apply to family " + family_name(family.family));
  s.scaling = sc;
  if (family.family == Family::cgw) s.sigma = family.offspring.sigma();
  switch (family.family) {
    case Family::complete_binary: s.log_base_scale = 1.0 / std::log(2.0); break;
    case Family::bst: s.log_base_scale = 1.0 / 0.5; break;  // mu = 2 E[-U ln U] = 1/2
    case Family::preferential:
      s.log_base_scale = (1.0 + family.alpha) / (2.0 + family.alpha);
      s.conjectural = family.alpha != 0.0;
      break;
    case Family::complete_regular:
      s.zeta_atoms = {1.0 / std::log(static_cast<double>(family.regular.d))};
      break;
    case Family::mixture:
      s.zeta_atoms.clear();
      for (const auto& c : family.components) s.zeta_atoms.push_back(1.0 / std::log(static_cast<double>(c.d)));
      s.zeta_weights.assign(s.zeta_atoms.size(), 1.0);
      break;
    default: break;
  }
  return s;
}

double LimitSpec::scale(std::int64_t n, const std::string& stat) const {
  const int rank = stat_rank(stat);
  const double nn = static_cast<double>(n);
  const double r = rank == 0 ? 1.0 : rank;
  const double kk = k;
  if (scaling == "none") return 1.0;
  if (scaling == "cgw") {
    if (rank == -1) return std::pow(sigma, -2.0 / kk) * std::pow(nn, -2.0 + 1.0 / kk);
    if (rank <= 1) return std::pow(sigma, -1.0 / kk) * std::pow(nn, -1.0 + 1.0 / (2 * kk));
    return std::pow(nn, -1.0 + r / (2 * kk));
  }
  if (scaling == "path") {
    if (rank == -1) return std::pow(nn, -2.0 + 2.0 / kk);
    return std::pow(nn, -1.0 + r / kk);
  }
  // log-height: a_n = 1 / (c ln n)
  const double inv_a = log_base_scale * std::log(nn);
  if (rank == -1) return std::pow(nn, -2.0) * std::pow(inv_a, 2.0 / kk);
  return std::pow(inv_a, r / kk) / nn;
}

double LimitSpec::limit(const std::string& stat) const {
  const int rank = stat_rank(stat);
  if (scaling == "none") return kNaN;
  try {
    if (scaling == "cgw") {
      if (rank == -1) return k == 1 ? rayleigh_moment(2) : eta(k, 2, 200000, 7).value;
      if (rank <= 1) return eta_k1_closed(k);
      return kr_limit_cgw(k, rank, sigma);
    }
    if (scaling == "path") {
      const auto tent = PiecewiseLinearWalk::tent();
      if (rank == -1) return m_q(tent, k, 2).value;
      return record_mean_limit_walk(tent, k, rank == 0 ? 1 : rank);
    }
    if (rank == -1) return z_zeta_moments(zeta_atoms, zeta_weights, k, 2, 0, 1).value;
    return record_mean_limit_zeta(zeta_atoms, zeta_weights, k, rank == 0 ? 1 : rank);
  } catch (const IntegrabilityError&) {
    return kNaN;  // e.g. K_k on paths grows like ln n and has no finite limit
  }
}

// ------------------------------------------------------------- runner

int default_threads() {
  if (const char* env = std::getenv("KCUT_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const auto hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace {

struct Item {
  std::vector<double> stats;
  std::string error;
};

std::vector<double> replicate(const ExperimentConfig& cfg, const FamilySpec& spec, const Tree* fixed, Rng& rng) {
  std::optional<Tree> sampled;
  if (!fixed) sampled = generate(spec, rng);
  const Tree& t = fixed ? *fixed : *sampled;
  const int k = cfg.k;
  std::vector<double> out;
  if (cfg.mode == Mode::process) {
    out.push_back(static_cast<double>(simulate_cut_process(t, k, rng).total_cuts));
    return out;
  }
  std::vector<double> ranks(k);
  if (cfg.mode == Mode::records) {
    const auto rec = simulate_records(t, k, rng);
    for (int r = 0; r < k; ++r) ranks[r] = static_cast<double>(rec.records_per_rank[r]);
  } else {
    ranks = exact_mean_records_all(profile(t), k);
  }
  double total = 0.0;
  for (double v : ranks) total += v;
  out.push_back(total);
  out.insert(out.end(), ranks.begin(), ranks.end());
  if (cfg.second_moment)
    out.push_back(cfg.mode == Mode::records ? ranks[0] * ranks[0] : exact_second_moment_k1(t, k));
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads) {
  validate(cfg);
  if (threads <= 0) threads = cfg.threads > 0 ? cfg.threads : default_threads();
  const auto sizes = sweep_length(cfg);
  const auto names = stat_names(cfg);
  const auto limit_spec = make_limit_spec(cfg.family, cfg.k, cfg.scaling);
  const auto label = family_label(cfg.family);
  const bool deterministic = is_deterministic(cfg.family.family);

  std::vector<FamilySpec> specs(sizes);
  std::vector<std::string> setup_error(sizes);
  std::vector<std::optional<Tree>> fixed(sizes);
  // Deterministic exact-profile sizes need neither trees nor replicates.
  std::vector<std::optional<std::vector<double>>> direct(sizes);
  for (std::size_t i = 0; i < sizes; ++i) {
    try {
      specs[i] = spec_at(cfg, i);
      if (deterministic && cfg.mode == Mode::exact_profile) {
        const auto p = deterministic_profile(specs[i]);
        auto ranks = exact_mean_records_all(p, cfg.k);
        std::vector<double> v{0.0};
        for (double x : ranks) v[0] += x;
        v.insert(v.end(), ranks.begin(), ranks.end());
        if (cfg.second_moment) {
          Rng unused(0);
          v.push_back(exact_second_moment_k1(generate(specs[i], unused), cfg.k));
        }
        direct[i] = std::move(v);
      } else if (deterministic) {
        Rng unused(0);
        fixed[i] = generate(specs[i], unused);
      }
    } catch (const std::exception& e) {
      setup_error[i] = e.what();
    }
  }

  // Work items are (size index, replicate) pairs handed out by an atomic
  // counter; each writes only its own slot.
  const auto reps = static_cast<std::size_t>(cfg.replicates);
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < sizes; ++i)
    if (setup_error[i].empty() && !direct[i]) pending.push_back(i);
  std::vector<Item> items(pending.size() * reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const auto idx = next.fetch_add(1);
      if (idx >= items.size()) return;
      const auto i = pending[idx / reps];
      const auto j = idx % reps;
      Rng rng(mix_seed(cfg.seed, i, j));
      try {
        items[idx].stats = replicate(cfg, specs[i], fixed[i] ? &*fixed[i] : nullptr, rng);
      } catch (const std::exception& e) {
        items[idx].error = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(items.size(), 1))));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentResult res;
  std::map<std::string, double> limits;
  for (const auto& s : names) limits[s] = limit_spec.limit(s);
  std::size_t slot = 0;
  for (std::size_t i = 0; i < sizes; ++i) {
    auto base = [&](const std::string& stat) {
      Row r;
      r.family = label;
      r.k = cfg.k;
      r.n = setup_error[i].empty() || specs[i].n ? specs[i].n : 0;
      r.mode = mode_name(cfg.mode);
      r.stat = stat;
      r.seed = cfg.seed;
      return r;
    };
    auto error_row = [&](const std::string& msg) {
      Row r = base("error");
      r.mean = r.stderr_ = r.scaled_mean = r.limit_value = r.rel_dev = r.scaled_stderr = kNaN;
      r.note = sanitize(msg);
      res.rows.push_back(r);
      res.partial_failure = true;
    };
    if (!setup_error[i].empty()) {
      error_row(setup_error[i]);
      continue;
    }
    std::vector<MomentEstimate> est(names.size());
    std::int64_t count = 1;
    if (direct[i]) {
      for (std::size_t s = 0; s < names.size(); ++s) est[s] = estimate({(*direct[i])[s]});
    } else {
      const auto first = slot * reps;
      ++slot;
      std::string err;
      for (std::size_t j = 0; j < reps && err.empty(); ++j) err = items[first + j].error;
      if (!err.empty()) {
        error_row(err);
        continue;
      }
      std::vector<double> column(reps);
      for (std::size_t s = 0; s < names.size(); ++s) {
        for (std::size_t j = 0; j < reps; ++j) column[j] = items[first + j].stats[s];
        est[s] = estimate(column);
      }
      count = static_cast<std::int64_t>(reps);
    }
    for (std::size_t s = 0; s < names.size(); ++s) {
      Row r = base(names[s]);
      const double factor = limit_spec.scale(specs[i].n, names[s]);
      r.mean = est[s].mean;
      r.stderr_ = est[s].stderr_;
      r.scaled_mean = factor * r.mean;
      r.scaled_stderr = factor * r.stderr_;
      r.limit_value = limits[names[s]];
      r.rel_dev = (r.scaled_mean - r.limit_value) / r.limit_value;
      r.reps = count;
      if (limit_spec.conjectural) r.note = "conjectural limit";
      res.rows.push_back(r);
    }
  }
  return res;
}

// ------------------------------------------------------------- CSV

namespace {

const std::vector<std::string> kColumns = {"family", "k",     "n",       "mode", "stat",          "mean", "stderr",
                                           "scaled_mean", "limit_value", "rel_dev", "reps", "seed", "scaled_stderr",
                                           "note"};

double parse_double(const std::string& s) {
  if (s == "nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
  std::string buf = std::string(kCsvVersionLine) + "\n";
  for (std::size_t i = 0; i < kColumns.size(); ++i) buf += (i ? "," : "") + kColumns[i];
  buf += "\n";
  for (const auto& r : rows) {
    buf += sanitize(r.family) + "," + std::to_string(r.k) + "," + std::to_string(r.n) + "," + r.mode + "," + r.stat +
           "," + fmt(r.mean) + "," + fmt(r.stderr_) + "," + fmt(r.scaled_mean) + "," + fmt(r.limit_value) + "," +
           fmt(r.rel_dev) + "," + std::to_string(r.reps) + "," + std::to_string(r.seed) + "," + fmt(r.scaled_stderr) +
           "," + sanitize(r.note) + "\n";
  }
  os << buf;
}

std::vector<Row> read_csv(std::istream& is) {
  std::string line;
  std::vector<std::string> header;
  std::vector<Row> rows;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
  };
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      for (const auto& c : kColumns)
        if (c != "scaled_stderr" && c != "note" && std::find(header.begin(), header.end(), c) == header.end())
          throw Error("CSV schema error: missing column '" + c + "'");
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != header.size()) throw Error("CSV row has " + std::to_string(cells.size()) + " cells, expected " + std::to_string(header.size()));
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < header.size(); ++i) m[header[i]] = cells[i];
    Row r;
    r.family = m["family"];
    r.k = std::stoi(m["k"]);
    r.n = std::stoll(m["n"]);
    r.mode = m["mode"];
    r.stat = m["stat"];
    r.mean = parse_double(m["mean"]);
    r.stderr_ = parse_double(m["stderr"]);
    r.scaled_mean = parse_double(m["scaled_mean"]);
    r.limit_value = parse_double(m["limit_value"]);
    r.rel_dev = parse_double(m["rel_dev"]);
    r.reps = std::stoll(m["reps"]);
    r.seed = std::stoull(m["seed"]);
    if (m.count("scaled_stderr")) r.scaled_stderr = parse_double(m["scaled_stderr"]);
    if (m.count("note")) r.note = m["note"];
    rows.push_back(r);
  }
  if (header.empty()) throw Error("CSV schema error: no header line");
  return rows;
}

// ------------------------------------------------------------- compare

Report compare_to_limit(const std::vector<Row>& rows, const LimitSpec& spec) {
  Report rep;
  rep.conjectural = spec.conjectural;
  std::map<std::string, std::vector<const Row*>> by_stat;
  std::vector<std::string> order;
  const auto fam = family_name(spec.family);
  for (const auto& r : rows) {
    if (r.stat == "error") continue;
    if (r.family.rfind(fam, 0) != 0)
      throw ConfigError("row family '" + r.family + "' does not match limit family '" + fam + "'");
    if (r.k != spec.k) throw ConfigError("row k differs from the limit spec");
    if (!by_stat.count(r.stat)) order.push_back(r.stat);
    by_stat[r.stat].push_back(&r);
  }
  for (const auto& stat : order) {
    auto list = by_stat[stat];
    std::sort(list.begin(), list.end(), [](const Row* a, const Row* b) { return a->n < b->n; });
    StatReport s;
    s.stat = stat;
    const double lim = spec.limit(stat);
    s.has_limit = !std::isnan(lim);
    for (const Row* r : list) {
      s.n.push_back(r->n);
      s.rel_dev.push_back((spec.scale(r->n, stat) * r->mean - lim) / lim);
    }
    if (s.has_limit && !s.rel_dev.empty()) {
      s.abs_dev_decreasing = true;
      s.one_sided = true;
      for (std::size_t i = 1; i < s.rel_dev.size(); ++i) {
        if (!(std::fabs(s.rel_dev[i]) < std::fabs(s.rel_dev[i - 1]))) s.abs_dev_decreasing = false;
        if ((s.rel_dev[i] > 0) != (s.rel_dev[0] > 0)) s.one_sided = false;
      }
    }
    rep.stats.push_back(std::move(s));
  }
  return rep;
}

}  // namespace kcut
