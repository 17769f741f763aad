#ifndef DIGAPPROX_EVALUATOR_HPP
#define DIGAPPROX_EVALUATOR_HPP

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "digapprox/di_estimation.hpp"
#include "digapprox/errors.hpp"
#include "digapprox/graph_core.hpp"
#include "digapprox/linear_model.hpp"
#include "digapprox/panel.hpp"
#include "digapprox/parallel.hpp"

namespace digapprox {

/// Memoized source of I(X_addition -> X_target || X_conditioning) in nats.
/// Copies share one memo table; lookups are thread-safe.
class DIEvaluator {
 public:
  using Function = std::function<double(NodeId, const ParentSet&, const ParentSet&)>;

  DIEvaluator(int m, Function f) : m_(m), f_(std::move(f)), state_(std::make_shared<State>()) {
    if (m < 1) throw ValidationError("evaluator needs m >= 1");
  }

  int m() const { return m_; }

  double operator()(NodeId target, const ParentSet& addition,
                    const ParentSet& conditioning) const {
    ParentSet add = canonical(addition);
    ParentSet cond = canonical(conditioning);
    validate_parent_set(m_, target, add);
    validate_parent_set(m_, target, cond);
    if (add.empty()) return 0.0;
    Key key{target, std::move(add), std::move(cond)};
    {
      std::lock_guard lock(state_->mutex);
      const auto it = state_->memo.find(key);
      if (it != state_->memo.end()) return it->second;
    }
    const double value = f_(std::get<0>(key), std::get<1>(key), std::get<2>(key));
    if (!std::isfinite(value)) {
      throw NumericalError("non-finite directed information for target " +
                           std::to_string(target + 1));
    }
    std::lock_guard lock(state_->mutex);
    return state_->memo.emplace(std::move(key), value).first->second;
  }

  double increment(NodeId target, NodeId j, const ParentSet& conditioning) const {
    return (*this)(target, ParentSet{j}, conditioning);
  }

  double set_value(NodeId target, const ParentSet& set) const {
    return (*this)(target, set, ParentSet{});
  }

  std::size_t memo_size() const {
    std::lock_guard lock(state_->mutex);
    return state_->memo.size();
  }

 private:
  using Key = std::tuple<NodeId, ParentSet, ParentSet>;
  struct State {
    mutable std::mutex mutex;
    std::map<Key, double> memo;
  };

  int m_;
  Function f_;
  std::shared_ptr<State> state_;
};

inline DIEvaluator make_panel_evaluator(TimeSeriesPanel panel, EstimatorConfig config = {}) {
  const int m = static_cast<int>(panel.m());
  auto shared = std::make_shared<const TimeSeriesPanel>(std::move(panel));
  config.units = Units::nats;
  return DIEvaluator(m, [shared, config](NodeId i, const ParentSet& a, const ParentSet& c) {
    return estimate_di(*shared, i, a, c, config);
  });
}

inline DIEvaluator make_exact_evaluator(const LinearNetworkModel& model, int lags = 1) {
  auto oracle = std::make_shared<const GaussianProjectionOracle>(model, lags);
  return DIEvaluator(model.m(), [oracle](NodeId i, const ParentSet& a, const ParentSet& c) {
    return oracle->directed_information(i, a, c);
  });
}

/// Conditional values from set values: cache(C u A) - cache(C).
inline DIEvaluator make_cache_evaluator(DirectedInfoCache cache) {
  const int m = cache.m();
  auto shared = std::make_shared<const DirectedInfoCache>(std::move(cache));
  return DIEvaluator(m, [shared](NodeId i, const ParentSet& a, const ParentSet& c) {
    return shared->value(i, set_union(c, a)) - shared->value(i, c);
  });
}

/// Cache of I(X_B -> X_i) for every target and every B of each size in
/// `sizes` (defaults to {K}).
inline DirectedInfoCache build_cache(const DIEvaluator& eval, int K, std::vector<int> sizes = {},
                                     unsigned threads = 1) {
  const int m = eval.m();
  DirectedInfoCache cache(m, K);
  if (sizes.empty()) sizes.push_back(K);
  std::vector<std::pair<NodeId, ParentSet>> jobs;
  for (NodeId i = 0; i < m; ++i) {
    for (int k : sizes) {
      if (k < 0 || k >= m) throw ValidationError("cache set size out of range");
      for (auto& set : candidate_parent_sets(m, i, k)) jobs.emplace_back(i, std::move(set));
    }
  }
  std::vector<double> values(jobs.size());
  parallel_for(jobs.size(), threads,
               [&](std::size_t k) { values[k] = eval.set_value(jobs[k].first, jobs[k].second); });
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    cache.insert(jobs[k].first, jobs[k].second, values[k]);
  }
  return cache;
}

}  // namespace digapprox

#endif  // DIGAPPROX_EVALUATOR_HPP
