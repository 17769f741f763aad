#ifndef DIGAPPROX_SIMULATION_HPP
#define DIGAPPROX_SIMULATION_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "digapprox/approximation.hpp"
#include "digapprox/bounds.hpp"
#include "digapprox/errors.hpp"
#include "digapprox/evaluator.hpp"
#include "digapprox/linear_model.hpp"
#include "digapprox/panel.hpp"
#include "digapprox/parallel.hpp"
#include "digapprox/topr.hpp"

namespace digapprox {

struct ExperimentConfig {
  std::string name = "experiment";
  int m = 6;
  int K = 2;
  int L = 2;
  std::size_t n = 1000;
  int trials = 100;
  double edge_probability = 0.5;
  double noise_variance = 0.25;
  double spectral_target = 0.75;
  bool sample_diagonal = true;
  std::size_t r = 1;
  std::uint64_t seed = 0;
  int markov_order = 1;
  bool exact_selection = false;  // select with exact values instead of estimates
  bool connected = true;         // also run the connected algorithms
  bool root_has_parents = false;
  bool record_timing = false;
  unsigned threads = 1;
};

inline void validate_config(const ExperimentConfig& c) {
  if (c.m < 1) throw ValidationError("m must be >= 1");
  if (c.K < 0 || c.K >= c.m) throw ValidationError("K must satisfy 0 <= K < m");
  if (c.L < 0 || c.L >= c.m) throw ValidationError("L must satisfy 0 <= L < m");
  if (c.n < 2) throw ValidationError("n must be >= 2");
  if (c.trials < 0) throw ValidationError("trials must be >= 0");
  if (!(c.edge_probability >= 0 && c.edge_probability <= 1)) {
    throw ValidationError("edge probability must lie in [0, 1]");
  }
  if (!(c.noise_variance > 0)) throw ValidationError("noise variance must be positive");
  if (!(c.spectral_target > 0 && c.spectral_target < 1)) {
    throw ValidationError("spectral target must lie in (0, 1)");
  }
  if (c.r < 1) throw ValidationError("r must be >= 1");
  if (c.markov_order < 1) throw ValidationError("markov order must be >= 1");
}

/// Random stationary AR(1) network: off-diagonal entries nonzero with the
/// edge probability, nonzero values standard normal, then C scaled to the
/// target spectral radius. All-zero spectra are resampled.
inline LinearNetworkModel generate_ar_network(const ExperimentConfig& config,
                                              std::uint64_t trial_seed) {
  validate_config(config);
  std::seed_seq seq{static_cast<std::uint32_t>(trial_seed), static_cast<std::uint32_t>(trial_seed >> 32),
                    0x6d6f64u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution edge(config.edge_probability);
  const int m = config.m;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i == j ? config.sample_diagonal : edge(rng)) C(i, j) = normal(rng);
      }
    }
    const double rho = spectral_radius(C);
    if (!(rho > 1e-12)) continue;
    C *= config.spectral_target / rho;
    LinearNetworkModel model{C, Eigen::VectorXd::Constant(m, config.noise_variance)};
    return model;
  }
  throw NumericalError("could not draw a coefficient matrix with nonzero spectral radius");
}

/// Iterates X_t = C X_{t-1} + N_t from X_0 = 0, discarding 10 m burn-in steps.
inline TimeSeriesPanel simulate_panel(const LinearNetworkModel& model, std::size_t n,
                                      std::uint64_t seed) {
  validate_model(model);
  if (n < 2) throw ValidationError("n must be >= 2");
  const int m = model.m();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x70616eu};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd sd = model.noise_variances.cwiseSqrt();
  const std::size_t burn_in = 10 * static_cast<std::size_t>(m);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd noise(m);
  std::vector<double> data(static_cast<std::size_t>(m) * n);
  for (std::size_t t = 0; t < burn_in + n; ++t) {
    for (int i = 0; i < m; ++i) noise(i) = sd(i) * normal(rng);
    x = model.coefficients * x + noise;
    if (t >= burn_in) {
      for (int i = 0; i < m; ++i) data[static_cast<std::size_t>(i) * n + (t - burn_in)] = x(i);
    }
  }
  return TimeSeriesPanel(static_cast<std::size_t>(m), n, std::move(data));
}

namespace detail {

inline std::optional<double> safe_ratio(double num, double den) {
  if (!(std::abs(den) > 1e-300)) return std::nullopt;
  return num / den;
}

}  // namespace detail

/// Exact score of the greedy assignment over exact score of the optimal one.
inline std::optional<double> ratio_greedy_optimal(const ParentAssignment& greedy,
                                                  const ParentAssignment& optimal,
                                                  const DIEvaluator& exact) {
  if (greedy.m() != optimal.m()) throw ValidationError("assignments differ in m");
  return detail::safe_ratio(evaluate_score(greedy, exact), evaluate_score(optimal, exact));
}

/// Exact score of an assignment over exact score of the true parent sets.
inline std::optional<double> ratio_to_true(const ParentAssignment& assignment,
                                           const LinearNetworkModel& model,
                                           const DIEvaluator& exact) {
  if (assignment.m() != model.m()) throw ValidationError("assignment and model differ in m");
  return detail::safe_ratio(evaluate_score(assignment, exact),
                            evaluate_score(true_parents(model), exact));
}

struct TrialRow {
  std::string algorithm;  // optimal | greedy
  std::string cls;        // general | connected
  std::size_t rank = 1;
  ParentAssignment assignment;
  double score = 0.0;  // exact
  std::optional<double> ratio;              // to the true parent sets
  std::optional<double> ratio_to_optimal;   // to the optimal search at the same rank
  std::optional<double> alpha_hat;
  bool equals_optimal = false;
  double ms = 0.0;
};

struct TrialReport {
  int trial = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  double true_score = 0.0;
  std::vector<TrialRow> rows;
  std::optional<BoundCheck> general_bound;
  std::optional<BoundCheck> connected_bound;
  // Bounds re-checked with the exact evaluator on exact-value selections.
  std::optional<BoundCheck> general_bound_exact;
  std::optional<BoundCheck> connected_bound_exact;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialReport> trials;
  int failed = 0;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline TrialReport run_trial(const ExperimentConfig& config, int trial) {
  TrialReport report;
  report.trial = trial;
  report.seed = config.seed + static_cast<std::uint64_t>(trial);
  const auto model = generate_ar_network(config, report.seed);
  const DIEvaluator exact = make_exact_evaluator(model);
  DIEvaluator selection = exact;
  if (!config.exact_selection) {
    EstimatorConfig est;
    est.markov_order = config.markov_order;
    selection = make_panel_evaluator(simulate_panel(model, config.n, report.seed), est);
  }
  const int K = config.K;
  const int L = config.L;
  report.true_score = evaluate_score(true_parents(model), exact);

  auto make_row = [&](const char* algorithm, const char* cls, std::size_t rank,
                      const ParentAssignment& a, double ms) {
    TrialRow row;
    row.algorithm = algorithm;
    row.cls = cls;
    row.rank = rank;
    row.assignment = a;
    row.score = evaluate_score(a, exact);
    row.ratio = safe_ratio(row.score, report.true_score);
    row.ms = config.record_timing ? ms : 0.0;
    return row;
  };

  Stopwatch clock;
  const DirectedInfoCache cache = build_cache(selection, K);
  const double cache_ms = clock.ms();

  // unconstrained
  clock = Stopwatch();
  const auto opt_g = optimal_general(cache, K);
  auto row_opt_g = make_row("optimal", "general", 1, opt_g.assignment, cache_ms + clock.ms());
  clock = Stopwatch();
  const auto grd_g = greedy_general(selection, L);
  auto row_grd_g = make_row("greedy", "general", 1, grd_g.assignment, clock.ms());
  row_opt_g.ratio_to_optimal = 1.0;
  row_opt_g.equals_optimal = true;
  row_grd_g.ratio_to_optimal = safe_ratio(row_grd_g.score, row_opt_g.score);
  row_grd_g.equals_optimal = grd_g.assignment == opt_g.assignment;
  if (K >= 1 && L >= 1) {
    report.general_bound = check_greedy_bound(selection, grd_g.assignment, opt_g.assignment, K, L);
    row_opt_g.alpha_hat = row_grd_g.alpha_hat = report.general_bound->alpha.alpha;
    if (!config.exact_selection) {
      const auto cache_x = build_cache(exact, K);
      const auto opt_x = optimal_general(cache_x, K);
      const auto grd_x = greedy_general(exact, L);
      report.general_bound_exact = check_greedy_bound(exact, grd_x.assignment, opt_x.assignment, K, L);
    } else {
      report.general_bound_exact = report.general_bound;
    }
  }
  report.rows.push_back(row_opt_g);
  report.rows.push_back(row_grd_g);

  const bool connected = config.connected && config.m > 1 && K >= 1 && L >= 1;
  std::optional<ScoredApproximation> opt_c, grd_c;
  if (connected) {
    clock = Stopwatch();
    opt_c = optimal_connected(cache, K, config.root_has_parents);
    auto row_opt_c = make_row("optimal", "connected", 1, opt_c->assignment, cache_ms + clock.ms());
    clock = Stopwatch();
    grd_c = greedy_connected(selection, L, config.root_has_parents);
    auto row_grd_c = make_row("greedy", "connected", 1, grd_c->assignment, clock.ms());
    row_opt_c.ratio_to_optimal = 1.0;
    row_opt_c.equals_optimal = true;
    row_grd_c.ratio_to_optimal = safe_ratio(row_grd_c.score, row_opt_c.score);
    row_grd_c.equals_optimal = grd_c->assignment == opt_c->assignment;
    report.connected_bound = check_connected_greedy_bound(selection, *grd_c, *opt_c, K, L);
    row_opt_c.alpha_hat = row_grd_c.alpha_hat = report.connected_bound->alpha.alpha;
    if (!config.exact_selection) {
      const auto cache_x = build_cache(exact, K);
      const auto opt_x = optimal_connected(cache_x, K, config.root_has_parents);
      const auto grd_x = greedy_connected(exact, L, config.root_has_parents);
      report.connected_bound_exact = check_connected_greedy_bound(exact, grd_x, opt_x, K, L);
    } else {
      report.connected_bound_exact = report.connected_bound;
    }
    report.rows.push_back(row_opt_c);
    report.rows.push_back(row_grd_c);
  }

  if (config.r > 1) {
    auto ranked = [&](const char* algorithm, const char* cls, const TopRResult& result,
                      double ms, std::optional<double> alpha) {
      std::vector<TrialRow> rows;
      for (std::size_t k = 1; k < result.solutions.size(); ++k) {
        auto row = make_row(algorithm, cls, k + 1, result.solutions[k].assignment, ms);
        row.alpha_hat = alpha;
        rows.push_back(std::move(row));
      }
      return rows;
    };
    auto pair_up = [&](std::vector<TrialRow> opt, std::vector<TrialRow> grd) {
      for (std::size_t k = 0; k < opt.size(); ++k) {
        opt[k].ratio_to_optimal = 1.0;
        opt[k].equals_optimal = true;
      }
      for (std::size_t k = 0; k < grd.size(); ++k) {
        if (k < opt.size()) {
          grd[k].ratio_to_optimal = safe_ratio(grd[k].score, opt[k].score);
          grd[k].equals_optimal = grd[k].assignment == opt[k].assignment;
        }
      }
      report.rows.insert(report.rows.end(), opt.begin(), opt.end());
      report.rows.insert(report.rows.end(), grd.begin(), grd.end());
    };
    const auto alpha_g = report.general_bound ? std::optional(report.general_bound->alpha.alpha)
                                              : std::nullopt;
    clock = Stopwatch();
    const auto top_opt_g = top_r_general(cache, K, config.r);
    const double ms_opt_g = clock.ms();
    clock = Stopwatch();
    const auto top_grd_g = top_r_greedy(selection, L, config.r, false);
    const double ms_grd_g = clock.ms();
    pair_up(ranked("optimal", "general", top_opt_g, ms_opt_g, alpha_g),
            ranked("greedy", "general", top_grd_g, ms_grd_g, alpha_g));
    if (connected) {
      const auto alpha_c = std::optional(report.connected_bound->alpha.alpha);
      clock = Stopwatch();
      const auto top_opt_c = top_r_connected(cache, K, config.r, config.root_has_parents);
      const double ms_opt_c = clock.ms();
      clock = Stopwatch();
      const auto top_grd_c = top_r_greedy(selection, L, config.r, true, config.root_has_parents);
      const double ms_grd_c = clock.ms();
      pair_up(ranked("optimal", "connected", top_opt_c, ms_opt_c, alpha_c),
              ranked("greedy", "connected", top_grd_c, ms_grd_c, alpha_c));
    }
  }
  return report;
}

inline std::string format_number(std::optional<double> v) {
  if (!v) return "";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << *v;
  return os.str();
}

}  // namespace detail

/// Runs every trial (concurrently when threads > 1), trial t using seed + t.
/// Failed trials are kept with their error and excluded from aggregates.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ExperimentResult result;
  result.config = config;
  result.trials.resize(static_cast<std::size_t>(config.trials));
  parallel_for(result.trials.size(), config.threads, [&](std::size_t t) {
    try {
      result.trials[t] = detail::run_trial(config, static_cast<int>(t));
    } catch (const Error& e) {
      TrialReport failed;
      failed.trial = static_cast<int>(t);
      failed.seed = config.seed + t;
      failed.failed = true;
      failed.error = e.what();
      result.trials[t] = std::move(failed);
    }
  });
  for (const auto& t : result.trials) result.failed += t.failed ? 1 : 0;
  return result;
}

inline std::string experiment_file_name(const ExperimentConfig& config,
                                        const std::string& suffix = "") {
  return config.name + "_" + std::to_string(config.m) + "_" + std::to_string(config.K) + suffix +
         ".csv";
}

inline void write_trial_csv(std::ostream& out, const ExperimentResult& result) {
  out << "trial,algorithm,class,K,L,score,ratio,alpha_hat,ms,rank,ratio_to_optimal,"
         "equals_optimal\n";
  for (const auto& t : result.trials) {
    for (const auto& row : t.rows) {
      out << t.trial << ',' << row.algorithm << ',' << row.cls << ',' << result.config.K << ','
          << result.config.L << ',' << detail::format_number(row.score) << ','
          << detail::format_number(row.ratio) << ',' << detail::format_number(row.alpha_hat)
          << ',' << detail::format_number(row.ms) << ',' << row.rank << ','
          << detail::format_number(row.ratio_to_optimal) << ',' << (row.equals_optimal ? 1 : 0)
          << '\n';
    }
  }
}

struct AggregateRow {
  std::string algorithm;
  std::string cls;
  std::size_t rank = 1;
  int trials = 0;
  double mean_ratio = 0, std_ratio = 0, min_ratio = 0;
  double mean_ratio_to_optimal = 0, std_ratio_to_optimal = 0, min_ratio_to_optimal = 0;
  double fraction_optimal = 0;
};

inline std::vector<AggregateRow> aggregate(const ExperimentResult& result) {
  using Key = std::tuple<std::size_t, std::string, std::string>;  // rank, class, algorithm
  struct Acc {
    std::vector<double> ratio, to_opt;
    int count = 0;
    int optimal = 0;
  };
  std::map<Key, Acc> groups;
  for (const auto& t : result.trials) {
    if (t.failed) continue;
    for (const auto& row : t.rows) {
      auto& acc = groups[Key{row.rank, row.cls, row.algorithm}];
      ++acc.count;
      acc.optimal += row.equals_optimal ? 1 : 0;
      if (row.ratio) acc.ratio.push_back(*row.ratio);
      if (row.ratio_to_optimal) acc.to_opt.push_back(*row.ratio_to_optimal);
    }
  }
  auto stats = [](const std::vector<double>& v, double& mean, double& sd, double& mn) {
    mean = sd = mn = std::nan("");
    if (v.empty()) return;
    double s = 0;
    mn = v.front();
    for (double x : v) {
      s += x;
      mn = std::min(mn, x);
    }
    mean = s / static_cast<double>(v.size());
    double q = 0;
    for (double x : v) q += (x - mean) * (x - mean);
    sd = v.size() > 1 ? std::sqrt(q / static_cast<double>(v.size() - 1)) : 0.0;
  };
  std::vector<AggregateRow> rows;
  for (const auto& [key, acc] : groups) {
    AggregateRow row;
    row.rank = std::get<0>(key);
    row.cls = std::get<1>(key);
    row.algorithm = std::get<2>(key);
    row.trials = acc.count;
    stats(acc.ratio, row.mean_ratio, row.std_ratio, row.min_ratio);
    stats(acc.to_opt, row.mean_ratio_to_optimal, row.std_ratio_to_optimal,
          row.min_ratio_to_optimal);
    row.fraction_optimal = acc.count ? static_cast<double>(acc.optimal) / acc.count : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_aggregate_csv(std::ostream& out, const ExperimentResult& result) {
  out << "algorithm,class,K,L,rank,trials,failed_trials,mean_ratio,std_ratio,min_ratio,"
         "mean_ratio_to_optimal,std_ratio_to_optimal,min_ratio_to_optimal,fraction_optimal\n";
  for (const auto& row : aggregate(result)) {
    out << row.algorithm << ',' << row.cls << ',' << result.config.K << ',' << result.config.L
        << ',' << row.rank << ',' << row.trials << ',' << result.failed << ','
        << detail::format_number(row.mean_ratio) << ',' << detail::format_number(row.std_ratio)
        << ',' << detail::format_number(row.min_ratio) << ','
        << detail::format_number(row.mean_ratio_to_optimal) << ','
        << detail::format_number(row.std_ratio_to_optimal) << ','
        << detail::format_number(row.min_ratio_to_optimal) << ','
        << detail::format_number(row.fraction_optimal) << '\n';
  }
}

}  // namespace digapprox

#endif  // DIGAPPROX_SIMULATION_HPP
