#ifndef DIGAPPROX_APPROXIMATION_HPP
#define DIGAPPROX_APPROXIMATION_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "digapprox/errors.hpp"
#include "digapprox/evaluator.hpp"
#include "digapprox/graph_core.hpp"
#include "digapprox/greedy_order.hpp"
#include "digapprox/mwdst.hpp"
#include "digapprox/parallel.hpp"

namespace digapprox {

/// A parent set together with its directed information value.
struct ValuedSet {
  ParentSet set;
  double value = 0.0;
};

namespace detail {

inline void check_degree(int m, int K) {
  if (K < 0) throw ValidationError("degree must be non-negative");
  if (K >= m) {
    throw ValidationError("degree too large: K = " + std::to_string(K) + " needs m > K, m = " +
                          std::to_string(m));
  }
}

inline void check_connected_degree(int m, int K) {
  check_degree(m, K);
  if (m > 1 && K < 1) throw ValidationError("connected approximations need K >= 1");
}

// Solves the connected problem for per-edge candidates. choice(i, j)
// returns the candidate parent set for i when j -> i is a tree edge, and
// choice(i, m) the set used when i is the root and roots take parents. A
// null result forbids the edge. With root_has_parents the dummy edges carry
// value - offset, where the offset is large enough that no tree with two
// dummy children can beat a tree with one.
template <typename Choice>
std::optional<ScoredApproximation> solve_connected(int m, bool root_has_parents, Choice&& choice) {
  std::vector<ParentSet> parents(m);
  ScoredApproximation out;
  out.tree_parent.assign(m, std::nullopt);
  if (m == 1) {
    if (root_has_parents) {
      const ValuedSet* c = choice(0, 1);
      if (!c) return std::nullopt;
      parents[0] = c->set;
      out.score = c->value;
    }
    out.assignment = ParentAssignment(std::move(parents));
    out.root = 0;
    return out;
  }
  EdgeWeights weights(m);
  double max_abs = 0.0;
  for (NodeId i = 0; i < m; ++i) {
    for (NodeId j = 0; j < m; ++j) {
      if (j == i) continue;
      const ValuedSet* c = choice(i, j);
      if (c) {
        weights.set(j, i, c->value);
        max_abs = std::max(max_abs, std::abs(c->value));
      } else {
        weights.forbid(j, i);
      }
    }
  }
  std::vector<NodeId> source(m, -1);
  NodeId root = 0;
  if (!root_has_parents) {
    Arborescence tree;
    try {
      tree = max_weight_arborescence(weights);
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
    root = tree.root;
    for (NodeId i = 0; i < m; ++i) {
      if (tree.parent[i]) source[i] = *tree.parent[i];
    }
  } else {
    std::vector<const ValuedSet*> dummy(m);
    for (NodeId j = 0; j < m; ++j) {
      dummy[j] = choice(j, m);
      if (dummy[j]) max_abs = std::max(max_abs, std::abs(dummy[j]->value));
    }
    const double offset = 1.0 + 2.0 * (m + 1) * max_abs;
    std::vector<double> dummy_weights(m);
    for (NodeId j = 0; j < m; ++j) dummy_weights[j] = dummy[j] ? dummy[j]->value - offset : 0.0;
    EdgeWeights augmented = augment_with_dummy_root(weights, dummy_weights);
    for (NodeId j = 0; j < m; ++j) {
      if (!dummy[j]) augmented.forbid(0, j + 1);
    }
    Arborescence tree;
    try {
      tree = max_weight_arborescence(augmented, 0);
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
    int dummy_children = 0;
    for (NodeId i = 0; i < m; ++i) {
      const NodeId p = *tree.parent[i + 1];
      if (p == 0) {
        ++dummy_children;
        root = i;
        source[i] = m;
      } else {
        source[i] = p - 1;
      }
    }
    if (dummy_children != 1) return std::nullopt;
  }
  double score = 0.0;
  for (NodeId i = 0; i < m; ++i) {
    if (source[i] < 0) continue;
    const ValuedSet* c = choice(i, source[i]);
    parents[i] = c->set;
    score += c->value;
    if (source[i] < m) out.tree_parent[i] = source[i];
  }
  out.assignment = ParentAssignment(std::move(parents));
  out.score = score;
  out.root = root;
  return out;
}

}  // namespace detail

/// Best size-K parent set for each node independently; ties go to the
/// smallest parent_set_index. `degrees` gives one K per node.
inline ScoredApproximation optimal_general(const DirectedInfoCache& cache,
                                           const std::vector<int>& degrees) {
  const int m = cache.m();
  if (static_cast<int>(degrees.size()) != m) throw ValidationError("need one degree per node");
  std::vector<ParentSet> parents(m);
  for (NodeId i = 0; i < m; ++i) {
    detail::check_degree(m, degrees[i]);
    std::optional<double> best;
    for (auto& set : candidate_parent_sets(m, i, degrees[i])) {
      const double v = cache.value(i, set);
      if (!best || v > *best) {
        best = v;
        parents[i] = std::move(set);
      }
    }
  }
  ScoredApproximation out;
  out.assignment = ParentAssignment(std::move(parents));
  out.score = total_score(out.assignment, cache);
  return out;
}

inline ScoredApproximation optimal_general(const DirectedInfoCache& cache, int K) {
  return optimal_general(cache, std::vector<int>(cache.m(), K));
}

/// Per-edge candidates for the connected problems: best_with[i][j] is the
/// candidate for i that contains j (j < m), best_with[i][m] the one used
/// when i is a root with parents.
struct ConnectedCandidates {
  int m = 0;
  std::vector<std::vector<std::optional<ValuedSet>>> best_with;

  const ValuedSet* choice(NodeId i, NodeId j) const {
    const auto& c = best_with[i][j];
    return c ? &*c : nullptr;
  }

  EdgeWeights weights() const {
    EdgeWeights w(m);
    for (NodeId i = 0; i < m; ++i) {
      for (NodeId j = 0; j < m; ++j) {
        if (j == i) continue;
        if (const auto* c = choice(i, j)) {
          w.set(j, i, c->value);
        } else {
          w.forbid(j, i);
        }
      }
    }
    return w;
  }
};

inline ConnectedCandidates optimal_connected_candidates(const DirectedInfoCache& cache, int K) {
  const int m = cache.m();
  detail::check_connected_degree(m, K);
  ConnectedCandidates out;
  out.m = m;
  out.best_with.assign(m, std::vector<std::optional<ValuedSet>>(m + 1));
  for (NodeId i = 0; i < m; ++i) {
    for (auto& set : candidate_parent_sets(m, i, K)) {
      const double v = cache.value(i, set);
      auto offer = [&](NodeId slot) {
        auto& best = out.best_with[i][slot];
        if (!best || v > best->value) best = ValuedSet{set, v};
      };
      for (NodeId j : set) offer(j);
      offer(m);
    }
  }
  return out;
}

/// Best assignment whose edges contain a directed spanning tree. The root
/// gets no parents unless `root_has_parents`, in which case it keeps its
/// best unconstrained size-K set.
inline ScoredApproximation optimal_connected(const DirectedInfoCache& cache, int K,
                                             bool root_has_parents = false) {
  const auto candidates = optimal_connected_candidates(cache, K);
  auto solved = detail::solve_connected(
      cache.m(), root_has_parents, [&](NodeId i, NodeId j) { return candidates.choice(i, j); });
  if (!solved) throw InfeasibleError("infeasible: no connected approximation exists");
  return *solved;
}

/// Greedy parent sets grown one element at a time (ties to the smaller
/// index); the score is assembled with the chain rule.
inline ScoredApproximation greedy_general(const DIEvaluator& eval, int L, unsigned threads = 1) {
  const int m = eval.m();
  detail::check_degree(m, L);
  std::vector<GreedyPath> paths(m);
  parallel_for(static_cast<std::size_t>(m), threads,
               [&](std::size_t i) { paths[i] = greedy_parent_set(eval, static_cast<NodeId>(i), L); });
  std::vector<ParentSet> parents(m);
  ScoredApproximation out;
  for (NodeId i = 0; i < m; ++i) {
    parents[i] = paths[i].set;
    out.score += paths[i].value;
  }
  out.assignment = ParentAssignment(std::move(parents));
  return out;
}

/// B~(i, j): greedy sets seeded with j; slot m holds the unseeded greedy set.
inline ConnectedCandidates greedy_connected_candidates(const DIEvaluator& eval, int L,
                                                       bool with_root_sets = true,
                                                       unsigned threads = 1) {
  const int m = eval.m();
  detail::check_connected_degree(m, L);
  ConnectedCandidates out;
  out.m = m;
  out.best_with.assign(m, std::vector<std::optional<ValuedSet>>(m + 1));
  std::vector<std::pair<NodeId, NodeId>> jobs;
  for (NodeId i = 0; i < m; ++i) {
    for (NodeId j = 0; j <= m; ++j) {
      if (j != i && (j < m || with_root_sets)) jobs.emplace_back(i, j);
    }
  }
  std::vector<GreedyPath> paths(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = jobs[k];
    paths[k] = j < m ? greedy_parent_set(eval, i, L, {j}) : greedy_parent_set(eval, i, L);
  });
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    out.best_with[jobs[k].first][jobs[k].second] = ValuedSet{paths[k].set, paths[k].value};
  }
  return out;
}

inline ScoredApproximation greedy_connected(const DIEvaluator& eval, int L,
                                            bool root_has_parents = false, unsigned threads = 1) {
  const auto candidates = greedy_connected_candidates(eval, L, root_has_parents, threads);
  auto solved = detail::solve_connected(
      eval.m(), root_has_parents, [&](NodeId i, NodeId j) { return candidates.choice(i, j); });
  if (!solved) throw InfeasibleError("infeasible: no connected approximation exists");
  return *solved;
}

/// Sum over nodes of eval's I(X_A(i) -> X_i), in node order.
inline double evaluate_score(const ParentAssignment& assignment, const DIEvaluator& eval) {
  double score = 0.0;
  for (NodeId i = 0; i < assignment.m(); ++i) score += eval.set_value(i, assignment[i]);
  return score;
}

}  // namespace digapprox

#endif  // DIGAPPROX_APPROXIMATION_HPP
