#ifndef DIGAPPROX_GRAPH_CORE_HPP
#define DIGAPPROX_GRAPH_CORE_HPP

// Core combinatorial types: parent sets, assignments, the directed
// information cache, scoring, spanning-tree membership and the canonical
// indexing of parent sets and whole approximations.
//
// Node indices are zero-based everywhere inside the library. The JSON/DOT
// writers and the CLI translate to the one-based numbering users see.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "digapprox/combinatorics.hpp"
#include "digapprox/errors.hpp"

namespace digapprox {

using NodeId = int;

/// Members of a parent set, kept strictly ascending.
using ParentSet = std::vector<NodeId>;

inline std::string format_set(const ParentSet& set) {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < set.size(); ++k) os << (k ? "," : "") << set[k] + 1;
  os << '}';
  return os.str();
}

inline ParentSet canonical(ParentSet set) {
  std::sort(set.begin(), set.end());
  return set;
}

inline bool contains(const ParentSet& set, NodeId node) {
  return std::binary_search(set.begin(), set.end(), node);
}

/// Union of two canonical sets.
inline ParentSet set_union(const ParentSet& a, const ParentSet& b) {
  ParentSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ParentSet with_member(ParentSet set, NodeId node) {
  set.insert(std::upper_bound(set.begin(), set.end(), node), node);
  return set;
}

/// Throws unless `set` is a canonical parent set for `target` among m nodes.
inline void validate_parent_set(int m, NodeId target, const ParentSet& set) {
  if (target < 0 || target >= m) {
    throw ValidationError("target " + std::to_string(target + 1) + " out of range [1, " +
                          std::to_string(m) + "]");
  }
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (set[k] < 0 || set[k] >= m) {
      throw ValidationError("parent " + std::to_string(set[k] + 1) + " out of range");
    }
    if (set[k] == target) {
      throw ValidationError("parent set " + format_set(set) + " contains its own target " +
                            std::to_string(target + 1));
    }
    if (k > 0 && set[k] <= set[k - 1]) {
      throw ValidationError("parent set " + format_set(set) + " is not strictly ascending");
    }
  }
}

/// One parent set per node. Construction canonicalizes and validates.
class ParentAssignment {
 public:
  ParentAssignment() = default;

  explicit ParentAssignment(std::vector<ParentSet> parents) : parents_(std::move(parents)) {
    const int m = static_cast<int>(parents_.size());
    for (int i = 0; i < m; ++i) {
      parents_[i] = canonical(std::move(parents_[i]));
      validate_parent_set(m, i, parents_[i]);
    }
  }

  static ParentAssignment empty(int m) { return ParentAssignment(std::vector<ParentSet>(m)); }

  int m() const { return static_cast<int>(parents_.size()); }
  const ParentSet& operator[](NodeId i) const { return parents_.at(i); }
  const std::vector<ParentSet>& parents() const { return parents_; }

  /// Copy with node i's parent set replaced.
  ParentAssignment with(NodeId i, ParentSet set) const {
    ParentAssignment out = *this;
    out.parents_.at(i) = canonical(std::move(set));
    validate_parent_set(m(), i, out.parents_[i]);
    return out;
  }

  /// The common in-degree, if every node has the same one.
  std::optional<int> uniform_degree() const {
    if (parents_.empty()) return 0;
    const auto k = parents_.front().size();
    for (const auto& p : parents_) {
      if (p.size() != k) return std::nullopt;
    }
    return static_cast<int>(k);
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& p : parents_) n += p.size();
    return n;
  }

  friend bool operator==(const ParentAssignment&, const ParentAssignment&) = default;
  friend auto operator<=>(const ParentAssignment&, const ParentAssignment&) = default;

 private:
  std::vector<ParentSet> parents_;
};

/// Directed information values I(X_B -> X_i) in nats, keyed by
/// (target, canonical parent set). The empty set always maps to zero.
class DirectedInfoCache {
 public:
  DirectedInfoCache() = default;
  DirectedInfoCache(int m, int K) : m_(m), K_(K), entries_(m) {
    if (m < 1) throw ValidationError("cache needs m >= 1");
    if (K < 0 || K >= m) throw ValidationError("cache degree K must satisfy 0 <= K < m");
  }

  int m() const { return m_; }
  int K() const { return K_; }

  void insert(NodeId target, ParentSet set, double value) {
    set = canonical(std::move(set));
    validate_parent_set(m_, target, set);
    if (!std::isfinite(value)) {
      throw ValidationError("non-finite directed information for target " +
                            std::to_string(target + 1) + " and set " + format_set(set));
    }
    entries_[target][std::move(set)] = value;
  }

  bool contains(NodeId target, const ParentSet& set) const {
    if (target < 0 || target >= m_) return false;
    if (set.empty()) return true;
    return entries_[target].count(set) > 0;
  }

  /// Looks up a canonical set. Throws UncachedParentSet when absent.
  double value(NodeId target, const ParentSet& set) const {
    if (target < 0 || target >= m_) {
      throw ValidationError("target " + std::to_string(target + 1) + " out of range");
    }
    const auto& row = entries_[target];
    const auto it = row.find(set);
    if (it != row.end()) return it->second;
    if (set.empty()) return 0.0;
    throw UncachedParentSet("uncached parent set: target " + std::to_string(target + 1) +
                            ", set " + format_set(set));
  }

  const std::map<ParentSet, double>& entries(NodeId target) const { return entries_.at(target); }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& row : entries_) n += row.size();
    return n;
  }

  friend bool operator==(const DirectedInfoCache&, const DirectedInfoCache&) = default;

 private:
  int m_ = 0;
  int K_ = 0;
  std::vector<std::map<ParentSet, double>> entries_;
};

/// An assignment together with its total directed information. Connected
/// approximations also record the spanning-tree root and tree parents.
struct ScoredApproximation {
  ParentAssignment assignment;
  double score = 0.0;
  std::optional<NodeId> root;
  std::vector<std::optional<NodeId>> tree_parent;
};

/// Sum over nodes of cache[(i, parents[i])], accumulated in node order.
inline double total_score(const ParentAssignment& assignment, const DirectedInfoCache& cache) {
  if (assignment.m() != cache.m()) {
    throw ValidationError("assignment and cache disagree on m");
  }
  double score = 0.0;
  for (NodeId i = 0; i < assignment.m(); ++i) score += cache.value(i, assignment[i]);
  return score;
}

/// True iff the edges j->i (j in parents[i]) contain a directed spanning
/// tree rooted at `root`, or at some node when no root is given.
inline bool contains_spanning_arborescence(const ParentAssignment& assignment,
                                           std::optional<NodeId> root = std::nullopt) {
  const int m = assignment.m();
  if (m == 0) return true;
  std::vector<std::vector<NodeId>> children(m);
  for (NodeId i = 0; i < m; ++i) {
    for (NodeId j : assignment[i]) children[j].push_back(i);
  }
  auto reaches_all = [&](NodeId r) {
    std::vector<char> seen(m, 0);
    std::queue<NodeId> frontier;
    frontier.push(r);
    seen[r] = 1;
    int count = 1;
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      for (NodeId v : children[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          frontier.push(v);
        }
      }
    }
    return count == m;
  };
  if (root) {
    if (*root < 0 || *root >= m) throw ValidationError("root out of range");
    return reaches_all(*root);
  }
  for (NodeId r = 0; r < m; ++r) {
    if (reaches_all(r)) return true;
  }
  return false;
}

namespace detail {

// Lexicographic rank of the one-based ascending sequence `idx` among all
// |idx|-subsets of {1, ..., m-1}.
inline std::uint64_t lexicographic_rank(long long m, std::span<const long long> idx) {
  const auto K = static_cast<long long>(idx.size());
  if (K == 0) return 0;
  if (K == 1) return static_cast<std::uint64_t>(idx[0] - 1);
  std::uint64_t count = 0;
  for (long long l = 2; l <= idx[0]; ++l) count += binomial(m - l, K - 1);
  std::vector<long long> rest(idx.size() - 1);
  for (std::size_t k = 1; k < idx.size(); ++k) rest[k - 1] = idx[k] - idx[0];
  return count + lexicographic_rank(m - idx[0], rest);
}

}  // namespace detail

/// Zero-based lexicographic rank of `set` among the C(m-1, |set|) parent
/// sets available to `target`. Members above the target shift down by one
/// so the ranking is over {1, ..., m-1}.
inline std::uint64_t parent_set_index(int m, NodeId target, const ParentSet& set) {
  validate_parent_set(m, target, set);
  std::vector<long long> idx(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    // one-based member j becomes j-1 when j exceeds the one-based target
    idx[k] = set[k] < target ? set[k] + 1 : set[k];
  }
  return detail::lexicographic_rank(m, idx);
}

/// One-based index of a uniform-degree assignment:
/// 1 + sum_i a_i * C(m-1, K)^(i-1), with a_i the parent-set rank of node i.
inline BigInt approximation_index(int m, int K, const ParentAssignment& assignment) {
  if (assignment.m() != m) throw ValidationError("assignment size differs from m");
  const BigInt base = binomial_big(m - 1, K);
  BigInt index = 1;
  BigInt weight = 1;
  for (NodeId i = 0; i < m; ++i) {
    if (static_cast<int>(assignment[i].size()) != K) {
      throw ValidationError("approximation_index needs every parent set to have size " +
                            std::to_string(K) + "; node " + std::to_string(i + 1) + " has " +
                            std::to_string(assignment[i].size()));
    }
    index += weight * BigInt(parent_set_index(m, i, assignment[i]));
    weight *= base;
  }
  return index;
}

/// Total number of uniform in-degree K assignments, C(m-1, K)^m.
inline BigInt assignment_count(int m, int K) {
  BigInt count = 1;
  const BigInt base = binomial_big(m - 1, K);
  for (int i = 0; i < m; ++i) count *= base;
  return count;
}

/// Per-node codes used for canonical keys and tie ordering: 0 for an
/// empty parent set, 1 + parent_set_index for a set of size K. Comparing
/// the code vectors from the last node backwards reproduces the order of
/// approximation_index on uniform assignments.
using AssignmentKey = std::vector<std::uint64_t>;

inline AssignmentKey assignment_key(const ParentAssignment& assignment, int K) {
  AssignmentKey key(assignment.m());
  for (NodeId i = 0; i < assignment.m(); ++i) {
    const auto& set = assignment[i];
    if (set.empty()) {
      key[i] = 0;
    } else if (static_cast<int>(set.size()) == K) {
      key[i] = 1 + parent_set_index(assignment.m(), i, set);
    } else {
      throw ValidationError("parent set of node " + std::to_string(i + 1) +
                            " has neither size 0 nor K");
    }
  }
  return key;
}

inline bool index_order_less(const AssignmentKey& a, const AssignmentKey& b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

struct AssignmentKeyHash {
  std::size_t operator()(const AssignmentKey& key) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto v : key) {
      h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// All parent sets of size k for `target`, in parent_set_index order.
inline std::vector<ParentSet> candidate_parent_sets(int m, NodeId target, int k) {
  std::vector<int> universe;
  universe.reserve(m > 0 ? m - 1 : 0);
  for (int j = 0; j < m; ++j) {
    if (j != target) universe.push_back(j);
  }
  std::vector<ParentSet> out;
  for_each_combination(universe, k, [&](const std::vector<int>& s) { out.push_back(s); });
  return out;
}

}  // namespace digapprox

#endif  // DIGAPPROX_GRAPH_CORE_HPP
