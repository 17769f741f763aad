// digapprox: command-line front end for directed information estimation,
// bounded in-degree approximations, top-r enumeration, bound tables and
// simulation studies.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "digapprox/digapprox.hpp"

namespace fs = std::filesystem;
using namespace digapprox;

namespace {

struct EstimatorFlags {
  int markov_order = 1;
  std::string estimator = "gaussian";
  std::string units = "nats";
  std::optional<int> alphabet;
  bool intercept = false;
};

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& f) {
  cmd->add_option("--markov-order", f.markov_order, "Markov order l")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--estimator", f.estimator, "gaussian or discrete")
      ->check(CLI::IsMember({"gaussian", "discrete"}));
  cmd->add_option("--units", f.units, "nats or bits")->check(CLI::IsMember({"nats", "bits"}));
  cmd->add_option("--alphabet", f.alphabet, "alphabet size for the discrete estimator");
  cmd->add_flag("--intercept", f.intercept, "fit an intercept in Gaussian regressions");
}

EstimatorConfig to_config(const EstimatorFlags& f) {
  EstimatorConfig c;
  c.markov_order = f.markov_order;
  c.estimator = f.estimator == "discrete" ? EstimatorKind::discrete : EstimatorKind::gaussian;
  c.units = f.units == "bits" ? Units::bits : Units::nats;
  c.intercept = f.intercept;
  return c;
}

TimeSeriesPanel load_panel(const std::string& path, const EstimatorFlags& f) {
  auto panel = read_panel_csv(fs::path(path));
  if (f.estimator == "discrete") panel = to_finite_alphabet(panel, f.alphabet);
  return panel;
}

ParentSet to_set(const std::vector<int>& one_based, int m) {
  ParentSet set;
  for (int j : one_based) {
    if (j < 1 || j > m) throw ValidationError("process " + std::to_string(j) + " out of range");
    set.push_back(j - 1);
  }
  std::sort(set.begin(), set.end());
  if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
    throw ValidationError("duplicate process in set");
  }
  return set;
}

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

// Inputs shared by approximate and topr.
struct ModelInput {
  std::string panel;
  std::string cache;
  std::string cls = "general";
  std::string search = "optimal";
  int K = -1;
  int L = -1;
  bool root_has_parents = false;
  unsigned threads = 1;
  std::string out;
  EstimatorFlags est;
};

void add_model_flags(CLI::App* cmd, ModelInput& in) {
  auto* panel = cmd->add_option("--panel", in.panel, "panel CSV");
  auto* cache = cmd->add_option("--cache", in.cache, "directed information cache JSON");
  panel->excludes(cache);
  cmd->add_option("--class", in.cls, "general or connected")
      ->check(CLI::IsMember({"general", "connected"}));
  cmd->add_option("--search", in.search, "optimal or greedy")
      ->check(CLI::IsMember({"optimal", "greedy"}));
  cmd->add_option("-K,--K", in.K, "in-degree for optimal search");
  cmd->add_option("-L,--L", in.L, "in-degree for greedy search (defaults to K)");
  cmd->add_flag("--root-has-parents", in.root_has_parents, "give the tree root a parent set too");
  cmd->add_option("--threads", in.threads, "worker threads (0 = all cores)");
  cmd->add_option("--out", in.out, "output file (stdout when omitted)");
  add_estimator_flags(cmd, in.est);
}

struct Resolved {
  int m = 0;
  int degree = 0;
  std::optional<DirectedInfoCache> cache;
  std::optional<DIEvaluator> eval;
};

Resolved resolve(const ModelInput& in) {
  if (in.panel.empty() == in.cache.empty()) {
    throw ValidationError("give exactly one of --panel or --cache");
  }
  Resolved r;
  const bool greedy = in.search == "greedy";
  r.degree = greedy ? (in.L >= 0 ? in.L : in.K) : in.K;
  if (r.degree < 0) throw ValidationError(greedy ? "greedy search needs --L or --K" : "optimal search needs --K");
  if (!in.panel.empty()) {
    auto config = to_config(in.est);
    config.units = Units::nats;
    r.eval = make_panel_evaluator(load_panel(in.panel, in.est), config);
    r.m = r.eval->m();
    if (r.degree >= r.m) throw ValidationError("degree too large: need K < m");
    if (!greedy) r.cache = build_cache(*r.eval, r.degree, {}, in.threads);
  } else {
    r.cache = cache_from_json(read_json_file(in.cache));
    r.m = r.cache->m();
    if (r.degree >= r.m) throw ValidationError("degree too large: need K < m");
    if (greedy) r.eval = make_cache_evaluator(*r.cache);
  }
  return r;
}

Json approx_json(const ScoredApproximation& a, int K, Units units) {
  Json j = to_json(a, K);
  j["score"] = convert_units(a.score, units);
  j["units"] = units == Units::bits ? "bits" : "nats";
  return j;
}

int cmd_estimate(const std::string& panel_path, int target, const std::vector<int>& addition,
                 const std::vector<int>& conditioning, const EstimatorFlags& f,
                 const std::string& out) {
  const auto panel = load_panel(panel_path, f);
  const int m = static_cast<int>(panel.m());
  if (target < 1 || target > m) throw ValidationError("target out of range");
  const double v = estimate_di(panel, target - 1, to_set(addition, m), to_set(conditioning, m),
                               to_config(f));
  emit(out, fixed9(v) + "\n");
  return 0;
}

int cmd_cache_build(const std::string& panel_path, int K, std::vector<int> sizes,
                    unsigned threads, const EstimatorFlags& f, const std::string& out) {
  auto config = to_config(f);
  config.units = Units::nats;
  const auto eval = make_panel_evaluator(load_panel(panel_path, f), config);
  if (K < 0 || K >= eval.m()) throw ValidationError("degree too large: need 0 <= K < m");
  const auto cache = build_cache(eval, K, std::move(sizes), threads);
  emit(out, to_json(cache).dump(2) + "\n");
  return 0;
}

ScoredApproximation run_single(const ModelInput& in, const Resolved& r) {
  const bool connected = in.cls == "connected";
  if (in.search == "optimal") {
    return connected ? optimal_connected(*r.cache, r.degree, in.root_has_parents)
                     : optimal_general(*r.cache, r.degree);
  }
  return connected ? greedy_connected(*r.eval, r.degree, in.root_has_parents, in.threads)
                   : greedy_general(*r.eval, r.degree, in.threads);
}

int cmd_approximate(const ModelInput& in, const std::string& dot) {
  const auto r = resolve(in);
  const auto approx = run_single(in, r);
  const Units units = to_config(in.est).units;
  if (!in.out.empty()) write_text_file(in.out, approx_json(approx, r.degree, units).dump(2) + "\n");
  if (!dot.empty()) write_text_file(dot, to_dot(approx));
  std::cout << fixed9(convert_units(approx.score, units)) << "\n";
  return 0;
}

int cmd_topr(const ModelInput& in, std::size_t count, const std::string& dot_prefix) {
  const auto r = resolve(in);
  const bool connected = in.cls == "connected";
  TopRResult result;
  if (in.search == "optimal") {
    result = connected ? top_r_connected(*r.cache, r.degree, count, in.root_has_parents, in.threads)
                       : top_r_general(*r.cache, r.degree, count);
  } else {
    result = top_r_greedy(*r.eval, r.degree, count, connected, in.root_has_parents, in.threads);
  }
  const Units units = to_config(in.est).units;
  Json arr = Json::array();
  for (std::size_t k = 0; k < result.solutions.size(); ++k) {
    Json j = approx_json(result.solutions[k], r.degree, units);
    j["rank"] = k + 1;
    arr.push_back(std::move(j));
    if (!dot_prefix.empty()) {
      write_text_file(dot_prefix + std::to_string(k + 1) + ".dot", to_dot(result.solutions[k]));
    }
  }
  if (result.subset_cap_hit) std::cerr << "warning: edge-subset branching was truncated\n";
  if (result.exhausted) {
    std::cerr << "warning: only " << result.solutions.size() << " approximations exist\n";
  }
  emit(in.out, arr.dump(2) + "\n");
  return 0;
}

int cmd_bounds(const std::string& kind, const std::vector<double>& alphas,
               const std::vector<int>& Ks, const std::vector<int>& Ls, const std::string& out) {
  const auto rows =
      bound_table(alphas, Ks, Ls, kind == "degree-gap" ? BoundKind::degree_gap : BoundKind::greedy);
  std::ostringstream os;
  os << "alpha,K,L,coefficient\n";
  os << std::setprecision(10);
  for (const auto& row : rows) {
    os << row.alpha << ',' << row.K << ',' << row.L << ',' << row.coefficient << '\n';
  }
  emit(out, os.str());
  return 0;
}

int cmd_simulate(const ExperimentConfig& config, const std::string& out_dir, bool export_panels) {
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  const auto result = run_experiment(config);
  std::ostringstream trials, agg;
  write_trial_csv(trials, result);
  write_aggregate_csv(agg, result);
  const auto trial_path = dir / experiment_file_name(config);
  const auto agg_path = dir / experiment_file_name(config, "_aggregate");
  write_text_file(trial_path, trials.str());
  write_text_file(agg_path, agg.str());
  if (export_panels) {
    for (int t = 0; t < config.trials; ++t) {
      const auto seed = config.seed + static_cast<std::uint64_t>(t);
      std::ostringstream os;
      write_panel_csv(os, simulate_panel(generate_ar_network(config, seed), config.n, seed));
      write_text_file(dir / (config.name + "_panel_" + std::to_string(t) + ".csv"), os.str());
    }
  }
  for (const auto& t : result.trials) {
    if (t.failed) std::cerr << "trial " << t.trial << " failed: " << t.error << "\n";
  }
  std::cout << trial_path.string() << "\n" << agg_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed information graph approximations"};
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate I(X_A -> X_i || X_C) from a panel");
  std::string est_panel, est_out;
  int est_target = 0;
  std::vector<int> est_add, est_cond;
  EstimatorFlags est_flags;
  est->add_option("--panel", est_panel, "panel CSV")->required();
  est->add_option("--target", est_target, "target process (1-based)")->required();
  est->add_option("--addition", est_add, "added processes, comma separated")->delimiter(',');
  est->add_option("--conditioning", est_cond, "conditioning processes, comma separated")
      ->delimiter(',');
  est->add_option("--out", est_out, "output file (stdout when omitted)");
  add_estimator_flags(est, est_flags);

  // cache build
  auto* cache = app.add_subcommand("cache", "directed information caches");
  cache->require_subcommand(1);
  auto* build = cache->add_subcommand("build", "compute I(X_B -> X_i) for all |B| in sizes");
  std::string build_panel, build_out;
  int build_K = 0;
  unsigned build_threads = 1;
  std::vector<int> build_sizes;
  EstimatorFlags build_flags;
  build->add_option("--panel", build_panel, "panel CSV")->required();
  build->add_option("-K,--K", build_K, "cache degree")->required();
  build->add_option("--sizes", build_sizes, "set sizes to cache (default K)")->delimiter(',');
  build->add_option("--threads", build_threads, "worker threads (0 = all cores)");
  build->add_option("--out", build_out, "output file (stdout when omitted)");
  add_estimator_flags(build, build_flags);

  // approximate
  auto* approx = app.add_subcommand("approximate", "one bounded in-degree approximation");
  ModelInput approx_in;
  std::string approx_dot;
  add_model_flags(approx, approx_in);
  approx->add_option("--dot", approx_dot, "also write GraphViz DOT here");

  // topr
  auto* topr = app.add_subcommand("topr", "the r best approximations");
  ModelInput topr_in;
  std::size_t topr_r = 1;
  std::string topr_dot;
  add_model_flags(topr, topr_in);
  topr->add_option("-r,--r", topr_r, "number of approximations")->required();
  topr->add_option("--dot-prefix", topr_dot, "write <prefix><rank>.dot per solution");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "near-optimality coefficient tables");
  std::string bounds_kind = "greedy", bounds_out;
  std::vector<double> bounds_alpha{1.0, 1.3, 1.7, 2.5};
  std::vector<int> bounds_K{1, 2, 3, 4, 5, 6};
  std::vector<int> bounds_L{1, 2, 3, 4, 5, 6};
  bounds->add_option("--coefficient", bounds_kind, "greedy or degree-gap")
      ->check(CLI::IsMember({"greedy", "degree-gap"}));
  bounds->add_option("--alpha", bounds_alpha, "alpha values, comma separated")->delimiter(',');
  bounds->add_option("-K,--K", bounds_K, "K values, comma separated")->delimiter(',');
  bounds->add_option("-L,--L", bounds_L, "L values, comma separated")->delimiter(',');
  bounds->add_option("--out", bounds_out, "output CSV (stdout when omitted)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "random AR(1) network study");
  ExperimentConfig sim_config;
  std::string sim_out;
  bool sim_panels = false, sim_no_diagonal = false, sim_no_connected = false;
  sim->add_option("--name", sim_config.name, "experiment name used in file names");
  sim->add_option("-m,--m", sim_config.m, "number of processes");
  sim->add_option("-K,--K", sim_config.K, "in-degree for optimal search");
  sim->add_option("-L,--L", sim_config.L, "in-degree for greedy search");
  sim->add_option("-n,--n", sim_config.n, "time steps");
  sim->add_option("--trials", sim_config.trials, "number of trials");
  sim->add_option("--edge-probability", sim_config.edge_probability, "off-diagonal edge probability");
  sim->add_option("--noise-variance", sim_config.noise_variance, "noise variance");
  sim->add_option("--spectral-target", sim_config.spectral_target, "spectral radius after scaling");
  sim->add_option("-r,--r", sim_config.r, "top-r depth per class");
  sim->add_option("--seed", sim_config.seed, "base seed; trial t uses seed + t");
  sim->add_option("--markov-order", sim_config.markov_order, "Markov order l")
      ->check(CLI::PositiveNumber);
  std::string sim_estimator = "gaussian";
  sim->add_option("--estimator", sim_estimator, "estimator used for selection")
      ->check(CLI::IsMember({"gaussian"}));
  std::string sim_units = "nats";
  sim->add_option("--units", sim_units, "units (CSV scores are always nats)")
      ->check(CLI::IsMember({"nats", "bits"}));
  sim->add_flag("--exact-selection", sim_config.exact_selection, "select with exact values");
  sim->add_flag("--no-diagonal", sim_no_diagonal, "do not sample self coefficients");
  sim->add_flag("--no-connected", sim_no_connected, "skip the connected algorithms");
  sim->add_flag("--root-has-parents", sim_config.root_has_parents, "give tree roots parent sets");
  sim->add_flag("--timing", sim_config.record_timing, "record wall-clock ms per algorithm");
  sim->add_flag("--export-panels", sim_panels, "write each simulated panel as CSV");
  sim->add_option("--threads", sim_config.threads, "concurrent trials (0 = all cores)");
  sim->add_option("--out", sim_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*est) return cmd_estimate(est_panel, est_target, est_add, est_cond, est_flags, est_out);
    if (*build) {
      return cmd_cache_build(build_panel, build_K, build_sizes, build_threads, build_flags,
                             build_out);
    }
    if (*approx) return cmd_approximate(approx_in, approx_dot);
    if (*topr) return cmd_topr(topr_in, topr_r, topr_dot);
    if (*bounds) return cmd_bounds(bounds_kind, bounds_alpha, bounds_K, bounds_L, bounds_out);
    if (*sim) {
      sim_config.sample_diagonal = !sim_no_diagonal;
      sim_config.connected = !sim_no_connected;
      return cmd_simulate(sim_config, sim_out, sim_panels);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
