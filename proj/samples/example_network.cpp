// Builds a small AR(1) network, simulates a panel, and compares the optimal
// and greedy connected approximations against the exact model.

#include <cstdio>

#include "digapprox/digapprox.hpp"

using namespace digapprox;

int main() {
  ExperimentConfig config;
  config.m = 5;
  config.K = 2;
  config.L = 2;
  config.n = 2000;
  config.seed = 7;

  const auto model = generate_ar_network(config, config.seed);
  const auto panel = simulate_panel(model, config.n, config.seed);

  const auto estimated = make_panel_evaluator(panel, EstimatorConfig{});
  const auto exact = make_exact_evaluator(model);
  const auto cache = build_cache(estimated, config.K);

  const auto optimal = optimal_connected(cache, config.K);
  const auto greedy = greedy_connected(estimated, config.L);

  std::printf("optimal  %s  exact score %.6f\n", to_json(optimal, config.K).dump().c_str(),
              evaluate_score(optimal.assignment, exact));
  std::printf("greedy   %s  exact score %.6f\n", to_json(greedy, config.K).dump().c_str(),
              evaluate_score(greedy.assignment, exact));

  const auto check = check_connected_greedy_bound(estimated, greedy, optimal, config.K, config.L);
  std::printf("alpha %.4f  coefficient %.4f  bound %s\n", check.alpha.alpha, check.coefficient,
              check.holds ? "holds" : "violated");
  std::printf("%s", to_dot(optimal).c_str());
}
