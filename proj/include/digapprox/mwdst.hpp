#ifndef DIGAPPROX_MWDST_HPP
#define DIGAPPROX_MWDST_HPP

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "digapprox/errors.hpp"
#include "digapprox/graph_core.hpp"

namespace digapprox {

/// Weights of the complete directed graph on m nodes; weight(j, i) is the
/// weight of edge j -> i. Self loops are always forbidden.
class EdgeWeights {
 public:
  EdgeWeights() = default;
  explicit EdgeWeights(int m)
      : m_(m), w_(static_cast<std::size_t>(m) * m, 0.0),
        forbidden_(static_cast<std::size_t>(m) * m, 0) {
    if (m < 1) throw ValidationError("edge weights need m >= 1");
    for (int i = 0; i < m; ++i) forbidden_[slot(i, i)] = 1;
  }

  int m() const { return m_; }

  double weight(NodeId from, NodeId to) const { return w_[slot(from, to)]; }
  bool allowed(NodeId from, NodeId to) const { return !forbidden_[slot(from, to)]; }

  void set(NodeId from, NodeId to, double weight) {
    check(from, to);
    if (from == to) throw ValidationError("self loops cannot carry weight");
    if (!std::isfinite(weight)) throw ValidationError("edge weight must be finite");
    w_[slot(from, to)] = weight;
    forbidden_[slot(from, to)] = 0;
  }

  void forbid(NodeId from, NodeId to) {
    check(from, to);
    forbidden_[slot(from, to)] = 1;
  }

 private:
  std::size_t slot(NodeId from, NodeId to) const {
    return static_cast<std::size_t>(from) * m_ + to;
  }
  void check(NodeId from, NodeId to) const {
    if (from < 0 || from >= m_ || to < 0 || to >= m_) throw ValidationError("edge out of range");
  }

  int m_ = 0;
  std::vector<double> w_;
  std::vector<char> forbidden_;
};

struct Arborescence {
  NodeId root = 0;
  std::vector<std::optional<NodeId>> parent;
  double weight = 0.0;
};

/// Sum of tree edge weights, accumulated in node order.
inline double arborescence_weight(const EdgeWeights& weights,
                                  const std::vector<std::optional<NodeId>>& parent) {
  double total = 0.0;
  for (NodeId i = 0; i < static_cast<NodeId>(parent.size()); ++i) {
    if (parent[i]) total += weights.weight(*parent[i], i);
  }
  return total;
}

namespace detail {

struct Arc {
  int u;
  int v;
  double w;
  NodeId from;  // original endpoints, for tie-breaking
  NodeId to;
};

inline bool arc_better(const Arc& a, const Arc& b) {
  if (a.w != b.w) return a.w > b.w;
  if (a.from != b.from) return a.from < b.from;
  return a.to < b.to;
}

// Chu-Liu/Edmonds on n nodes. Returns, for each node, the index into
// `arcs` of its incoming tree arc (-1 for the root), or nullopt when some
// node is unreachable.
inline std::optional<std::vector<int>> edmonds(int n, int root, const std::vector<Arc>& arcs) {
  std::vector<int> best(n, -1);
  for (int k = 0; k < static_cast<int>(arcs.size()); ++k) {
    const Arc& a = arcs[k];
    if (a.v == root || a.u == a.v) continue;
    if (best[a.v] < 0 || arc_better(a, arcs[best[a.v]])) best[a.v] = k;
  }
  for (int v = 0; v < n; ++v) {
    if (v != root && best[v] < 0) return std::nullopt;
  }

  // Cycles among the chosen arcs.
  std::vector<int> comp(n, -1);
  std::vector<int> mark(n, -1);
  std::vector<char> on_cycle(n, 0);
  int components = 0;
  bool any_cycle = false;
  for (int s = 0; s < n; ++s) {
    int v = s;
    while (v != root && mark[v] < 0 && comp[v] < 0) {
      mark[v] = s;
      v = arcs[best[v]].u;
    }
    if (v != root && comp[v] < 0 && mark[v] == s) {
      any_cycle = true;
      int x = v;
      do {
        comp[x] = components;
        on_cycle[x] = 1;
        x = arcs[best[x]].u;
      } while (x != v);
      ++components;
    }
  }
  if (!any_cycle) {
    best[root] = -1;
    return best;
  }
  for (int v = 0; v < n; ++v) {
    if (comp[v] < 0) comp[v] = components++;
  }

  std::vector<Arc> contracted;
  std::vector<int> origin;
  contracted.reserve(arcs.size());
  origin.reserve(arcs.size());
  for (int k = 0; k < static_cast<int>(arcs.size()); ++k) {
    const Arc& a = arcs[k];
    if (comp[a.u] == comp[a.v]) continue;
    Arc c = a;
    c.u = comp[a.u];
    c.v = comp[a.v];
    if (on_cycle[a.v]) c.w = a.w - arcs[best[a.v]].w;
    contracted.push_back(c);
    origin.push_back(k);
  }
  const auto sub = edmonds(components, comp[root], contracted);
  if (!sub) return std::nullopt;

  std::vector<int> result(n, -1);
  for (int v = 0; v < n; ++v) {
    if (on_cycle[v]) result[v] = best[v];
  }
  for (int c = 0; c < components; ++c) {
    if ((*sub)[c] < 0) continue;
    const int k = origin[(*sub)[c]];
    result[arcs[k].v] = k;  // replaces the cycle arc into its head, if any
  }
  result[root] = -1;
  return result;
}

inline std::optional<Arborescence> rooted_arborescence(const EdgeWeights& weights, NodeId root) {
  const int m = weights.m();
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(m) * m);
  for (NodeId j = 0; j < m; ++j) {
    for (NodeId i = 0; i < m; ++i) {
      if (i != root && weights.allowed(j, i)) arcs.push_back({j, i, weights.weight(j, i), j, i});
    }
  }
  const auto chosen = edmonds(m, root, arcs);
  if (!chosen) return std::nullopt;
  Arborescence tree;
  tree.root = root;
  tree.parent.assign(m, std::nullopt);
  for (NodeId i = 0; i < m; ++i) {
    if ((*chosen)[i] >= 0) tree.parent[i] = arcs[(*chosen)[i]].from;
  }
  tree.weight = arborescence_weight(weights, tree.parent);
  return tree;
}

}  // namespace detail

/// Maximum-weight spanning arborescence. With no root given every root is
/// tried and the smallest root among equally heavy trees wins.
inline Arborescence max_weight_arborescence(const EdgeWeights& weights,
                                            std::optional<NodeId> root = std::nullopt) {
  const int m = weights.m();
  if (m < 1) throw ValidationError("arborescence needs m >= 1");
  if (root) {
    if (*root < 0 || *root >= m) throw ValidationError("root out of range");
    auto tree = detail::rooted_arborescence(weights, *root);
    if (!tree) {
      throw InfeasibleError("infeasible: no finite-weight arborescence rooted at " +
                            std::to_string(*root + 1));
    }
    return *tree;
  }
  std::optional<Arborescence> best;
  for (NodeId r = 0; r < m; ++r) {
    auto tree = detail::rooted_arborescence(weights, r);
    if (tree && (!best || tree->weight > best->weight)) best = std::move(tree);
  }
  if (!best) throw InfeasibleError("infeasible: no finite-weight arborescence exists");
  return *best;
}

/// Adds a dummy node 0 in front of the m real nodes (real node j becomes
/// j + 1). Edges into the dummy are forbidden and each edge 0 -> j gets
/// `dummy_weights[j]`, by default -1.
inline EdgeWeights augment_with_dummy_root(const EdgeWeights& weights,
                                           std::span<const double> dummy_weights = {}) {
  const int m = weights.m();
  if (!dummy_weights.empty() && static_cast<int>(dummy_weights.size()) != m) {
    throw ValidationError("need one dummy edge weight per node");
  }
  EdgeWeights out(m + 1);
  for (NodeId j = 0; j < m; ++j) {
    out.forbid(j + 1, 0);
    out.set(0, j + 1, dummy_weights.empty() ? -1.0 : dummy_weights[j]);
    for (NodeId i = 0; i < m; ++i) {
      if (i == j) continue;
      if (weights.allowed(j, i)) {
        out.set(j + 1, i + 1, weights.weight(j, i));
      } else {
        out.forbid(j + 1, i + 1);
      }
    }
  }
  return out;
}

}  // namespace digapprox

#endif  // DIGAPPROX_MWDST_HPP
