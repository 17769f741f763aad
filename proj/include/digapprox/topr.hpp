#ifndef DIGAPPROX_TOPR_HPP
#define DIGAPPROX_TOPR_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "digapprox/approximation.hpp"
#include "digapprox/errors.hpp"
#include "digapprox/evaluator.hpp"
#include "digapprox/graph_core.hpp"
#include "digapprox/greedy_order.hpp"
#include "digapprox/parallel.hpp"

namespace digapprox {

/// True when (score_a, key_a) is emitted before (score_b, key_b): higher
/// score first, then smaller approximation index.
inline bool ranks_before(double score_a, const AssignmentKey& key_a, double score_b,
                         const AssignmentKey& key_b) {
  if (score_a != score_b) return score_a > score_b;
  return index_order_less(key_a, key_b);
}

/// Max-priority queue of candidate approximations, ordered by score and
/// then approximation index, that refuses keys it has seen before.
template <typename Payload>
class BasicCandidatePool {
 public:
  struct Entry {
    ScoredApproximation approx;
    AssignmentKey key;
    Payload payload;
    std::uint64_t sequence = 0;
  };

  /// `seen_key` defaults to the order key, i.e. deduplication by assignment.
  bool push(ScoredApproximation approx, AssignmentKey key, Payload payload,
            std::optional<std::vector<std::uint64_t>> seen_key = std::nullopt) {
    if (!mark_seen(seen_key ? std::move(*seen_key) : key)) return false;
    enqueue(std::move(approx), std::move(key), std::move(payload));
    return true;
  }

  /// Queues without consulting or updating the seen set.
  void enqueue(ScoredApproximation approx, AssignmentKey key, Payload payload) {
    queue_.push(Entry{std::move(approx), std::move(key), std::move(payload), sequence_++});
    max_size_ = std::max(max_size_, queue_.size());
  }

  /// Records a key without queueing anything; false if already seen.
  bool mark_seen(std::vector<std::uint64_t> key) { return seen_.insert(std::move(key)).second; }
  bool seen(const std::vector<std::uint64_t>& key) const { return seen_.count(key) > 0; }

  bool empty() const { return queue_.empty(); }
  std::size_t size() const { return queue_.size(); }
  std::size_t max_size() const { return max_size_; }

  Entry pop() {
    Entry top = queue_.top();
    queue_.pop();
    return top;
  }

 private:
  struct After {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.approx.score != b.approx.score || a.key != b.key) {
        return ranks_before(b.approx.score, b.key, a.approx.score, a.key);
      }
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, After> queue_;
  std::unordered_set<std::vector<std::uint64_t>, AssignmentKeyHash> seen_;
  std::uint64_t sequence_ = 0;
  std::size_t max_size_ = 0;
};

using CandidatePool = BasicCandidatePool<std::vector<std::uint32_t>>;

struct TopRResult {
  std::vector<ScoredApproximation> solutions;
  bool subset_cap_hit = false;  // some edge-subset branching was truncated
  bool exhausted = false;       // fewer than r members exist
  std::size_t states_explored = 0;
  std::size_t max_pool_size = 0;
};

inline constexpr std::size_t kSubsetCap = 12;

namespace detail {

struct RankedSet : ValuedSet {
  std::uint64_t code = 0;  // 1 + parent_set_index
};

inline bool ranked_better(const RankedSet& a, const RankedSet& b) {
  return a.value != b.value ? a.value > b.value : a.code < b.code;
}

inline void check_r(int m, int K, std::size_t r) {
  if (r < 1 || BigInt(r) > assignment_count(m, K)) {
    throw ValidationError("r must satisfy 1 <= r <= C(m-1,K)^m");
  }
}

// Per-node parent sets sorted by (value desc, index asc).
struct GeneralRanking {
  std::vector<std::vector<RankedSet>> sets;
  std::vector<std::vector<std::uint32_t>> position_of_code;
};

inline GeneralRanking rank_parent_sets(const DirectedInfoCache& cache, int K) {
  const int m = cache.m();
  check_degree(m, K);
  GeneralRanking out;
  out.sets.resize(m);
  out.position_of_code.resize(m);
  for (NodeId i = 0; i < m; ++i) {
    auto& row = out.sets[i];
    std::uint64_t code = 1;
    for (auto& set : candidate_parent_sets(m, i, K)) {
      const double v = cache.value(i, set);
      row.push_back(RankedSet{{std::move(set), v}, code++});
    }
    std::stable_sort(row.begin(), row.end(), ranked_better);
    out.position_of_code[i].assign(row.size() + 1, 0);
    for (std::uint32_t p = 0; p < row.size(); ++p) out.position_of_code[i][row[p].code] = p;
  }
  return out;
}

template <typename Row>
ScoredApproximation assemble(const std::vector<Row*>& rows, const std::vector<std::uint32_t>& pos,
                             AssignmentKey& key) {
  const int m = static_cast<int>(pos.size());
  std::vector<ParentSet> parents(m);
  ScoredApproximation out;
  key.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    const RankedSet& s = (*rows[i])[pos[i]];
    parents[i] = s.set;
    out.score += s.value;
    key[i] = s.code;
  }
  out.assignment = ParentAssignment(std::move(parents));
  return out;
}

// Lazily materialized greedy enumeration for one (target, seed).
class LazyGreedyList {
 public:
  LazyGreedyList(const DIEvaluator& eval, NodeId target, int L, std::vector<NodeId> seed)
      : m_(eval.m()), target_(target), it_(eval, target, L, std::move(seed)) {}

  // Ensures items [0, d] exist if possible; returns the d-th or nullptr.
  const RankedSet* at(std::size_t d) {
    while (items_.size() <= d && !done_) {
      auto path = it_.next();
      if (!path) {
        done_ = true;
        break;
      }
      items_.push_back(
          RankedSet{{path->set, path->value}, 1 + parent_set_index(m_, target_, path->set)});
    }
    return d < items_.size() ? &items_[d] : nullptr;
  }

  const RankedSet* peek(std::size_t d) const { return d < items_.size() ? &items_[d] : nullptr; }

 private:
  int m_;
  NodeId target_;
  GreedyOrderEnumerator it_;
  std::vector<RankedSet> items_;
  bool done_ = false;
};

// Candidate lists per (target, source); source m is the root slot.
class ExactEdgeLists {
 public:
  ExactEdgeLists(const DirectedInfoCache& cache, int K) : m_(cache.m()) {
    check_connected_degree(m_, K);
    lists_.resize(static_cast<std::size_t>(m_) * (m_ + 1));
    for (NodeId i = 0; i < m_; ++i) {
      std::uint64_t code = 1;
      for (auto& set : candidate_parent_sets(m_, i, K)) {
        const RankedSet item{{set, cache.value(i, set)}, code++};
        for (NodeId j : set) lists_[slot(i, j)].push_back(item);
        lists_[slot(i, m_)].push_back(item);
      }
    }
    for (auto& l : lists_) std::stable_sort(l.begin(), l.end(), ranked_better);
  }

  const RankedSet* at(NodeId i, NodeId j, std::size_t d) { return peek(i, j, d); }
  const RankedSet* peek(NodeId i, NodeId j, std::size_t d) const {
    const auto& l = lists_[slot(i, j)];
    return d < l.size() ? &l[d] : nullptr;
  }

 private:
  std::size_t slot(NodeId i, NodeId j) const { return static_cast<std::size_t>(i) * (m_ + 1) + j; }
  int m_;
  std::vector<std::vector<RankedSet>> lists_;
};

class GreedyEdgeLists {
 public:
  GreedyEdgeLists(const DIEvaluator& eval, int L, bool root_has_parents) : m_(eval.m()) {
    check_connected_degree(m_, L);
    lists_.resize(static_cast<std::size_t>(m_) * (m_ + 1));
    for (NodeId i = 0; i < m_; ++i) {
      for (NodeId j = 0; j <= m_; ++j) {
        if (j == i || (j == m_ && !root_has_parents)) continue;
        std::vector<NodeId> seed;
        if (j < m_) seed.push_back(j);
        lists_[slot(i, j)].emplace(eval, i, L, std::move(seed));
      }
    }
  }

  const RankedSet* at(NodeId i, NodeId j, std::size_t d) {
    auto& l = lists_[slot(i, j)];
    return l ? l->at(d) : nullptr;
  }
  const RankedSet* peek(NodeId i, NodeId j, std::size_t d) const {
    const auto& l = lists_[slot(i, j)];
    return l ? l->peek(d) : nullptr;
  }

 private:
  std::size_t slot(NodeId i, NodeId j) const { return static_cast<std::size_t>(i) * (m_ + 1) + j; }
  int m_;
  std::vector<std::optional<LazyGreedyList>> lists_;
};

// Edge-demotion enumeration of connected approximations. A state holds,
// for every (target, source) pair, how many leading candidates of that
// edge's list are excluded. Each popped state is branched for every node
// i by demoting i's tree edge together with any subset of the other edges
// whose current candidate equals the chosen parent set of i.
template <typename Lists>
TopRResult connected_top_r(int m, std::size_t r, bool root_has_parents, Lists& lists,
                           unsigned threads) {
  using Depth = std::vector<std::uint32_t>;
  const std::size_t width = static_cast<std::size_t>(m) + 1;
  auto slot = [&](NodeId i, NodeId j) { return static_cast<std::size_t>(i) * width + j; };

  auto solve = [&](const Depth& depth) {
    return solve_connected(m, root_has_parents, [&](NodeId i, NodeId j) -> const ValuedSet* {
      return lists.peek(i, j, depth[slot(i, j)]);
    });
  };
  auto materialize = [&](const Depth& depth) {
    for (NodeId i = 0; i < m; ++i) {
      for (NodeId j = 0; j <= m; ++j) {
        if (j != i) lists.at(i, j, depth[slot(i, j)]);
      }
    }
  };
  auto to_seen_key = [](const Depth& d) { return std::vector<std::uint64_t>(d.begin(), d.end()); };
  auto source_of = [&](const ScoredApproximation& a, NodeId i) -> NodeId {
    if (a.tree_parent[i]) return *a.tree_parent[i];
    return root_has_parents ? m : -1;
  };

  TopRResult result;
  BasicCandidatePool<Depth> pool;
  Depth start(static_cast<std::size_t>(m) * width, 0);
  materialize(start);
  auto first = solve(start);
  if (!first) throw InfeasibleError("infeasible: no connected approximation exists");
  const int K = [&] {
    for (const auto& p : first->assignment.parents()) {
      if (!p.empty()) return static_cast<int>(p.size());
    }
    return 0;
  }();
  pool.push(*first, assignment_key(first->assignment, K), start, to_seen_key(start));

  std::unordered_set<AssignmentKey, AssignmentKeyHash> emitted;
  while (result.solutions.size() < r && !pool.empty()) {
    auto entry = pool.pop();
    ++result.states_explored;
    if (emitted.insert(entry.key).second) {
      result.solutions.push_back(entry.approx);
      if (result.solutions.size() == r) break;
    }
    const auto& seed = entry.approx;
    std::vector<Depth> children;
    for (NodeId i = 0; i < m; ++i) {
      const NodeId s = source_of(seed, i);
      if (s < 0) continue;
      const ParentSet& chosen = seed.assignment[i];
      std::vector<NodeId> others;
      for (NodeId j = 0; j <= m; ++j) {
        if (j == i || j == s || (j == m && !root_has_parents)) continue;
        const RankedSet* c = lists.peek(i, j, entry.payload[slot(i, j)]);
        if (c && c->set == chosen) others.push_back(j);
      }
      std::vector<std::vector<NodeId>> subsets;
      if (others.size() > kSubsetCap) {
        result.subset_cap_hit = true;
        subsets = {{}, others};
      } else {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << others.size()); ++mask) {
          std::vector<NodeId> sub;
          for (std::size_t b = 0; b < others.size(); ++b) {
            if (mask >> b & 1) sub.push_back(others[b]);
          }
          subsets.push_back(std::move(sub));
        }
      }
      for (auto& sub : subsets) {
        Depth child = entry.payload;
        ++child[slot(i, s)];
        for (NodeId j : sub) ++child[slot(i, j)];
        if (!pool.mark_seen(to_seen_key(child))) continue;
        materialize(child);
        children.push_back(std::move(child));
      }
    }
    std::vector<std::optional<ScoredApproximation>> solved(children.size());
    parallel_for(children.size(), threads, [&](std::size_t k) { solved[k] = solve(children[k]); });
    for (std::size_t k = 0; k < children.size(); ++k) {
      if (!solved[k] || solved[k]->assignment == seed.assignment) continue;
      auto key = assignment_key(solved[k]->assignment, K);
      pool.enqueue(std::move(*solved[k]), std::move(key), std::move(children[k]));
    }
  }
  result.exhausted = result.solutions.size() < r;
  result.max_pool_size = pool.max_size();
  return result;
}

}  // namespace detail

/// For each node i, the seed with A(i) replaced by the next parent set in
/// (value desc, index asc) order, when one exists.
inline std::vector<ParentAssignment> get_new_solutions(const DirectedInfoCache& cache, int K,
                                                       const ParentAssignment& seed) {
  const auto ranking = detail::rank_parent_sets(cache, K);
  std::vector<ParentAssignment> out;
  for (NodeId i = 0; i < cache.m(); ++i) {
    if (static_cast<int>(seed[i].size()) != K) throw ValidationError("seed degree differs from K");
    const auto code = 1 + parent_set_index(cache.m(), i, seed[i]);
    const auto p = ranking.position_of_code[i][code];
    if (p + 1 < ranking.sets[i].size()) out.push_back(seed.with(i, ranking.sets[i][p + 1].set));
  }
  return out;
}

/// The r best uniform in-degree K assignments, best first.
inline TopRResult top_r_general(const DirectedInfoCache& cache, int K, std::size_t r) {
  const int m = cache.m();
  detail::check_r(m, K, r);
  const auto ranking = detail::rank_parent_sets(cache, K);
  std::vector<const std::vector<detail::RankedSet>*> rows;
  for (const auto& row : ranking.sets) rows.push_back(&row);
  TopRResult result;
  CandidatePool pool;
  std::vector<std::uint32_t> pos(m, 0);
  AssignmentKey key;
  auto first = detail::assemble(rows, pos, key);
  pool.push(std::move(first), key, pos);
  while (result.solutions.size() < r && !pool.empty()) {
    auto entry = pool.pop();
    ++result.states_explored;
    result.solutions.push_back(std::move(entry.approx));
    for (NodeId i = 0; i < m; ++i) {
      if (entry.payload[i] + 1 >= ranking.sets[i].size()) continue;
      auto child = entry.payload;
      ++child[i];
      auto approx = detail::assemble(rows, child, key);
      pool.push(std::move(approx), key, std::move(child));
    }
  }
  result.exhausted = result.solutions.size() < r;
  result.max_pool_size = pool.max_size();
  return result;
}

/// The r best connected assignments, best first.
inline TopRResult top_r_connected(const DirectedInfoCache& cache, int K, std::size_t r,
                                  bool root_has_parents = false, unsigned threads = 1) {
  detail::check_r(cache.m(), K, r);
  detail::ExactEdgeLists lists(cache, K);
  return detail::connected_top_r(cache.m(), r, root_has_parents, lists, threads);
}

/// r assignments in greedy depth-first order. Without `connected` each
/// node's sets follow the greedy choice-rank enumeration; with it the
/// seeded greedy lists feed the edge-demotion scheme.
inline TopRResult top_r_greedy(const DIEvaluator& eval, int L, std::size_t r, bool connected,
                               bool root_has_parents = false, unsigned threads = 1) {
  const int m = eval.m();
  detail::check_r(m, L, r);
  if (connected) {
    detail::GreedyEdgeLists lists(eval, L, root_has_parents);
    return detail::connected_top_r(m, r, root_has_parents, lists, threads);
  }
  detail::check_degree(m, L);
  std::vector<detail::LazyGreedyList> lists;
  lists.reserve(m);
  for (NodeId i = 0; i < m; ++i) lists.emplace_back(eval, i, L, std::vector<NodeId>{});
  auto gather = [&](const std::vector<std::uint32_t>& pos, AssignmentKey& key) {
    std::vector<ParentSet> parents(m);
    ScoredApproximation out;
    key.assign(m, 0);
    for (NodeId i = 0; i < m; ++i) {
      const detail::RankedSet* s = lists[i].at(pos[i]);
      parents[i] = s->set;
      out.score += s->value;
      key[i] = s->code;
    }
    out.assignment = ParentAssignment(std::move(parents));
    return out;
  };
  TopRResult result;
  CandidatePool pool;
  std::vector<std::uint32_t> pos(m, 0);
  AssignmentKey key;
  auto first = gather(pos, key);
  pool.push(std::move(first), key, pos);
  while (result.solutions.size() < r && !pool.empty()) {
    auto entry = pool.pop();
    ++result.states_explored;
    result.solutions.push_back(std::move(entry.approx));
    for (NodeId i = 0; i < m; ++i) {
      if (!lists[i].at(entry.payload[i] + 1)) continue;
      auto child = entry.payload;
      ++child[i];
      auto approx = gather(child, key);
      pool.push(std::move(approx), key, std::move(child));
    }
  }
  result.exhausted = result.solutions.size() < r;
  result.max_pool_size = pool.max_size();
  return result;
}

}  // namespace digapprox

#endif  // DIGAPPROX_TOPR_HPP
