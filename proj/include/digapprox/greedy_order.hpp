#ifndef DIGAPPROX_GREEDY_ORDER_HPP
#define DIGAPPROX_GREEDY_ORDER_HPP

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "digapprox/di_estimation.hpp"
#include "digapprox/errors.hpp"
#include "digapprox/evaluator.hpp"
#include "digapprox/graph_core.hpp"

namespace digapprox {

/// A parent set grown one element at a time, with the chain-rule
/// increment of each addition.
struct GreedyPath {
  ParentSet set;
  std::vector<NodeId> order;
  std::vector<double> increments;
  double value = 0.0;
};

/// Candidates ranked by I(X_l -> X_target || X_prefix), best first, ties to
/// the smaller index.
inline std::vector<std::pair<NodeId, double>> rank_greedy_candidates(
    const DIEvaluator& eval, NodeId target, const std::vector<NodeId>& prefix,
    const std::vector<NodeId>& candidates) {
  const ParentSet conditioning = canonical(prefix);
  std::vector<std::pair<NodeId, double>> ranked;
  ranked.reserve(candidates.size());
  for (NodeId l : candidates) {
    if (l == target || contains(conditioning, l)) continue;
    ranked.emplace_back(l, eval.increment(target, l, conditioning));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return ranked;
}

/// Enumerates L-element parent sets for one target in depth-first order over
/// greedy choice ranks. The first set is the plain greedy choice; later sets
/// change the last greedy slot first and backtrack to earlier slots once it
/// is exhausted. A slot that takes its k-th ranked candidate bans the k
/// better ones from deeper slots, so every set appears once. An optional
/// seed fixes the first elements.
class GreedyOrderEnumerator {
 public:
  GreedyOrderEnumerator(DIEvaluator eval, NodeId target, int L, std::vector<NodeId> seed = {},
                        std::optional<std::vector<NodeId>> pool = std::nullopt)
      : eval_(std::move(eval)), target_(target), L_(L) {
    const int m = eval_.m();
    if (target < 0 || target >= m) throw ValidationError("target out of range");
    if (L < 0 || L >= m) throw ValidationError("greedy degree L must satisfy 0 <= L < m");
    if (static_cast<int>(seed.size()) > L) throw ValidationError("seed longer than L");
    validate_parent_set(m, target, canonical(seed));
    if (pool) {
      pool_ = canonical(*pool);
      pool_.erase(std::unique(pool_.begin(), pool_.end()), pool_.end());
      validate_parent_set(m, target, pool_);
    } else {
      for (NodeId j = 0; j < m; ++j) {
        if (j != target) pool_.push_back(j);
      }
    }
    Frame root;
    for (NodeId j : seed) {
      root.increments.push_back(eval_.increment(target, j, canonical(root.prefix)));
      root.prefix.push_back(j);
    }
    if (static_cast<int>(root.prefix.size()) == L_) {
      pending_ = finish(root.prefix, root.increments);
    } else {
      root.ranked = rank_greedy_candidates(eval_, target_, root.prefix, pool_);
      stack_.push_back(std::move(root));
    }
  }

  std::optional<GreedyPath> next() {
    if (pending_) {
      auto out = std::move(pending_);
      pending_.reset();
      return out;
    }
    while (!stack_.empty()) {
      Frame& top = stack_.back();
      const std::size_t need = static_cast<std::size_t>(L_) - top.prefix.size();
      if (top.next >= top.ranked.size() || top.ranked.size() - top.next - 1 < need - 1) {
        stack_.pop_back();
        continue;
      }
      const std::size_t k = top.next++;
      Frame child;
      child.prefix = top.prefix;
      child.prefix.push_back(top.ranked[k].first);
      child.increments = top.increments;
      child.increments.push_back(top.ranked[k].second);
      child.banned = top.banned;
      for (std::size_t b = 0; b < k; ++b) child.banned.push_back(top.ranked[b].first);
      if (static_cast<int>(child.prefix.size()) == L_) {
        return finish(child.prefix, child.increments);
      }
      std::vector<NodeId> candidates;
      for (NodeId l : pool_) {
        if (std::find(child.banned.begin(), child.banned.end(), l) == child.banned.end()) {
          candidates.push_back(l);
        }
      }
      child.ranked = rank_greedy_candidates(eval_, target_, child.prefix, candidates);
      stack_.push_back(std::move(child));
    }
    return std::nullopt;
  }

 private:
  struct Frame {
    std::vector<NodeId> prefix;
    std::vector<double> increments;
    std::vector<NodeId> banned;
    std::vector<std::pair<NodeId, double>> ranked;
    std::size_t next = 0;
  };

  static GreedyPath finish(const std::vector<NodeId>& order, const std::vector<double>& incs) {
    GreedyPath path;
    path.order = order;
    path.set = canonical(order);
    path.increments = incs;
    path.value = di_chain_rule(incs);
    return path;
  }

  DIEvaluator eval_;
  NodeId target_;
  int L_;
  std::vector<NodeId> pool_;
  std::vector<Frame> stack_;
  std::optional<GreedyPath> pending_;
};

/// The plain greedy choice of L parents for `target`, optionally seeded.
inline GreedyPath greedy_parent_set(const DIEvaluator& eval, NodeId target, int L,
                                    std::vector<NodeId> seed = {}) {
  GreedyOrderEnumerator it(eval, target, L, std::move(seed));
  auto path = it.next();
  if (!path) throw ValidationError("greedy search found no parent set");
  return *path;
}

}  // namespace digapprox

#endif  // DIGAPPROX_GREEDY_ORDER_HPP
