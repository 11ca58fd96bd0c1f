#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "kcut/cutting.hpp"
#include "kcut/errors.hpp"
#include "kcut/generators.hpp"
#include "kcut/harness.hpp"
#include "kcut/limits.hpp"
#include "kcut/rng.hpp"
#include "kcut/tree.hpp"

using namespace kcut;
using nlohmann::json;

namespace {

struct FamilyArgs {
  std::string family;
  std::int64_t n = 0;
  double alpha = 0.0;
  int d = 2;
  int height = -1;
  std::string offspring = "poisson1";
  std::vector<double> pmf;
  std::vector<std::string> components;  // "d:height"

  void add_to(CLI::App* app) {
    app->add_option("--family", family, "Tree family");
    app->add_option("--n", n, "Vertex count");
    app->add_option("--alpha", alpha, "Preferential attachment offset");
    app->add_option("--d", d, "Arity of a complete regular tree");
    app->add_option("--height", height, "Height of a complete binary or regular tree");
    app->add_option("--offspring", offspring, "CGW offspring law: poisson1 | geometric_half");
    app->add_option("--pmf", pmf, "CGW offspring pmf p0,p1,...")->delimiter(',');
    app->add_option("--component", components, "Mixture component d:height (repeatable)");
  }

  FamilySpec spec() const {
    FamilySpec f;
    f.family = parse_family(family);
    f.alpha = alpha;
    switch (f.family) {
      case Family::complete_binary:
        f.n = height >= 0 ? (std::int64_t{1} << (height + 1)) - 1 : n;
        break;
      case Family::complete_regular:
        if (height < 0) throw ParameterError("complete_regular needs --height");
        f.regular = {d, height};
        break;
      case Family::mixture:
        for (const auto& c : components) {
          const auto colon = c.find(':');
          if (colon == std::string::npos) throw ParameterError("mixture component must be d:height, got '" + c + "'");
          f.components.push_back({std::stoi(c.substr(0, colon)), std::stoi(c.substr(colon + 1))});
        }
        break;
      case Family::cgw:
        if (!pmf.empty())
          f.offspring = OffspringDist::custom(pmf);
        else if (offspring == "poisson1")
          f.offspring = OffspringDist::poisson1();
        else if (offspring == "geometric_half")
          f.offspring = OffspringDist::geometric_half();
        else
          throw ParameterError("unknown offspring law '" + offspring + "'");
        [[fallthrough]];
      default:
        f.n = n;
    }
    return f;
  }
};

Tree tree_from(const std::string& path, const FamilyArgs& fa, std::uint64_t seed) {
  if (!path.empty()) return load_tree(path);
  if (fa.family.empty()) throw ParameterError("give --tree or --family");
  Rng rng(mix_seed(seed, 0, 0));
  return generate(fa.spec(), rng);
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string format_g(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random k-cut simulation and limit constants"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a tree and write it in text form");
  FamilyArgs gen_fa;
  gen_fa.add_to(gen);
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output path ('-' for stdout)")->required();

  // cut
  auto* cut = app.add_subcommand("cut", "Monte Carlo cut counts on one tree");
  FamilyArgs cut_fa;
  cut_fa.add_to(cut);
  std::string cut_tree, cut_mode = "records", cut_out;
  int cut_k = 2;
  std::int64_t cut_reps = 1000;
  std::uint64_t cut_seed = 1;
  cut->add_option("--tree", cut_tree, "Tree file");
  cut->add_option("--k", cut_k, "Cuts needed to remove a vertex")->required();
  cut->add_option("--reps", cut_reps, "Replicates");
  cut->add_option("--mode", cut_mode, "process | records | both")
      ->check(CLI::IsMember({"process", "records", "both"}));
  cut->add_option("--seed", cut_seed, "Master seed");
  cut->add_option("--out", cut_out, "Per-replicate CSV (default stdout)");

  // exact
  auto* ex = app.add_subcommand("exact", "Exact E[K_r | T] from the depth profile");
  FamilyArgs ex_fa;
  ex_fa.add_to(ex);
  std::string ex_tree;
  int ex_k = 2;
  std::uint64_t ex_seed = 1;
  bool ex_second = false;
  ex->add_option("--tree", ex_tree, "Tree file");
  ex->add_option("--k", ex_k, "Cuts needed to remove a vertex")->required();
  ex->add_option("--seed", ex_seed, "Seed used when sampling a random family");
  ex->add_flag("--second-moment", ex_second, "Also print E[K_1^2 | T] (n <= 200)");

  // limit
  auto* lim = app.add_subcommand("limit", "Limit constants");
  std::string what, lim_method = "radial";
  int lim_k = 2, lim_q = 1, lim_r = 1;
  double lim_sigma = 1.0, lim_tol = 0.0;
  std::uint64_t lim_budget = 1000000, lim_seed = 1;
  std::vector<double> atoms{1.0}, weights;
  lim->add_option("--what", what, "Constant to compute")
      ->required()
      ->check(CLI::IsMember({"eta", "eta1", "m-path", "loght", "kr-cgw", "zzeta", "exc-moment"}));
  lim->add_option("--k", lim_k, "k")->required();
  lim->add_option("--q", lim_q, "Moment order");
  lim->add_option("--r", lim_r, "Record rank");
  lim->add_option("--sigma", lim_sigma, "Offspring standard deviation");
  lim->add_option("--budget", lim_budget, "Monte Carlo samples");
  lim->add_option("--seed", lim_seed, "Seed");
  lim->add_option("--tol", lim_tol, "Quadrature tolerance (m-path)");
  lim->add_option("--method", lim_method, "eta estimator: radial | poisson")
      ->check(CLI::IsMember({"radial", "poisson"}));
  lim->add_option("--atoms", atoms, "zeta atoms")->delimiter(',');
  lim->add_option("--weights", weights, "zeta weights")->delimiter(',');

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a configured sweep and write CSV");
  std::string cfg_path, exp_out, exp_mode;
  int exp_threads = 0;
  std::optional<std::uint64_t> exp_seed;
  std::optional<std::int64_t> exp_reps;
  std::optional<int> exp_k;
  exp->add_option("--config", cfg_path, "JSON config")->required();
  exp->add_option("--threads", exp_threads, "Worker threads (results do not depend on it)");
  exp->add_option("--out", exp_out, "CSV path (overrides config)");
  exp->add_option("--seed", exp_seed, "Master seed (overrides config)");
  exp->add_option("--reps", exp_reps, "Replicates (overrides config)");
  exp->add_option("--k", exp_k, "k (overrides config)");
  exp->add_option("--mode", exp_mode, "process | records | exact-profile (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      Rng rng(mix_seed(gen_seed, 0, 0));
      const Tree t = generate(gen_fa.spec(), rng);
      if (gen_out == "-")
        write_tree(std::cout, t);
      else
        save_tree(gen_out, t);
    } else if (*cut) {
      const Tree t = tree_from(cut_tree, cut_fa, cut_seed);
      if (cut_k < 1) throw ParameterError("k must be >= 1");
      if (cut_reps < 1) throw ParameterError("reps must be >= 1");
      std::ofstream file;
      if (!cut_out.empty()) {
        file.open(cut_out);
        if (!file) throw Error("cannot open " + cut_out);
      }
      std::ostream& os = cut_out.empty() ? std::cout : file;
      os << "mode,replicate,K";
      for (int r = 1; r <= cut_k; ++r) os << ",K_" << r;
      os << "\n";
      const bool do_process = cut_mode != "records", do_records = cut_mode != "process";
      std::vector<double> totals_p, totals_r;
      for (std::int64_t j = 0; j < cut_reps; ++j) {
        if (do_process) {
          Rng rng(mix_seed(cut_seed, 1, j));
          const auto c = simulate_cut_process(t, cut_k, rng);
          os << "process," << j << "," << c.total_cuts;
          for (int r = 1; r <= cut_k; ++r) os << ",";
          os << "\n";
          totals_p.push_back(static_cast<double>(c.total_cuts));
        }
        if (do_records) {
          Rng rng(mix_seed(cut_seed, 2, j));
          const auto rec = simulate_records(t, cut_k, rng);
          os << "records," << j << "," << rec.total();
          for (auto c : rec.records_per_rank) os << "," << c;
          os << "\n";
          totals_r.push_back(static_cast<double>(rec.total()));
        }
      }
      for (const auto* v : {&totals_p, &totals_r}) {
        if (v->empty()) continue;
        const auto m = estimate(*v);
        std::fprintf(stderr, "%s: mean K = %s, stderr = %s\n", v == &totals_p ? "process" : "records",
                     format_g(m.mean).c_str(), format_g(m.stderr_).c_str());
      }
    } else if (*ex) {
      const Tree t = tree_from(ex_tree, ex_fa, ex_seed);
      const auto means = exact_mean_records_all(profile(t), ex_k);
      double total = 0.0;
      for (double m : means) total += m;
      json j{{"n", t.size()}, {"k", ex_k}, {"mean_records", means}, {"mean_total", total}};
      if (ex_second) j["second_moment_k1"] = exact_second_moment_k1(t, ex_k);
      print_json(j);
    } else if (*lim) {
      Estimate e;
      if (what == "eta") {
        e = eta(lim_k, lim_q, lim_budget, lim_seed, lim_method == "poisson" ? EtaMethod::poisson : EtaMethod::radial);
      } else if (what == "eta1") {
        e = {eta_k1_closed(lim_k), 0.0, "closed form"};
      } else if (what == "m-path") {
        MqOptions opt;
        opt.samples = lim_budget;
        opt.seed = lim_seed;
        opt.tol = lim_tol;
        e = m_q(PiecewiseLinearWalk::tent(), lim_k, lim_q, opt);
      } else if (what == "loght") {
        e = {loght_limit(lim_k), 0.0, "closed form"};
      } else if (what == "kr-cgw") {
        e = {kr_limit_cgw(lim_k, lim_r, lim_sigma), 0.0, "closed form"};
      } else if (what == "zzeta") {
        e = z_zeta_moments(atoms, weights, lim_k, lim_q, lim_budget, lim_seed);
      } else {
        e = {excursion_inverse_moment(lim_k, lim_r), 0.0, "closed form"};
      }
      print_json({{"value", e.value}, {"error_estimate", e.error_estimate}, {"method", e.method}});
    } else if (*exp) {
      auto cfg = load_config(cfg_path);
      if (!exp_out.empty()) cfg.out = exp_out;
      if (exp_seed) cfg.seed = *exp_seed;
      if (exp_reps) cfg.replicates = *exp_reps;
      if (exp_k) cfg.k = *exp_k;
      if (!exp_mode.empty()) cfg.mode = parse_mode(exp_mode);
      if (exp_threads > 0) cfg.threads = exp_threads;
      const auto result = run_experiment(cfg, cfg.threads);
      if (cfg.out.empty() || cfg.out == "-") {
        write_csv(std::cout, result.rows);
      } else {
        std::ofstream file(cfg.out);
        if (!file) throw Error("cannot open " + cfg.out);
        write_csv(file, result.rows);
      }
      if (result.partial_failure) {
        std::fprintf(stderr, "experiment finished with failed cells\n");
        return 2;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
