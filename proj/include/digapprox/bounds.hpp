#ifndef DIGAPPROX_BOUNDS_HPP
#define DIGAPPROX_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "digapprox/approximation.hpp"
#include "digapprox/errors.hpp"
#include "digapprox/evaluator.hpp"
#include "digapprox/graph_core.hpp"
#include "digapprox/greedy_order.hpp"

namespace digapprox {

/// Increments at or below this are treated as zero when taking ratios.
inline constexpr double kZeroIncrement = 1e-12;

/// Largest ratio between consecutive greedy increments along one path.
struct AlphaEstimate {
  double alpha = 0.0;
  bool infinite = false;  // a positive increment followed a zero one
  std::vector<NodeId> order;
  std::vector<double> increments;
};

inline AlphaEstimate alpha_from_increments(std::span<const double> increments) {
  AlphaEstimate out;
  out.increments.assign(increments.begin(), increments.end());
  for (std::size_t k = 1; k < increments.size(); ++k) {
    const double num = increments[k];
    const double den = increments[k - 1];
    double ratio;
    if (den <= kZeroIncrement) {
      if (num <= kZeroIncrement) {
        ratio = 1.0;
      } else {
        out.infinite = true;
        ratio = std::numeric_limits<double>::infinity();
      }
    } else {
      ratio = std::max(0.0, num) / den;
    }
    out.alpha = std::max(out.alpha, ratio);
  }
  return out;
}

inline AlphaEstimate alpha_from_increments(const std::vector<double>& increments) {
  return alpha_from_increments(std::span<const double>(increments));
}

namespace detail {

// Greedy order of pool \ prefix after the forced prefix, and the alpha of
// the increments of the non-prefix part.
inline AlphaEstimate path_alpha(const DIEvaluator& eval, NodeId target, const ParentSet& pool,
                                const std::vector<NodeId>& prefix) {
  ParentSet all = set_union(canonical(pool), canonical(prefix));
  const int length = static_cast<int>(all.size());
  if (length == 0) return {};
  GreedyOrderEnumerator it(eval, target, length, prefix, std::vector<NodeId>(all));
  const auto path = it.next();
  if (!path) throw ValidationError("empty greedy path");
  std::vector<double> tail(path->increments.begin() + static_cast<long>(prefix.size()),
                           path->increments.end());
  AlphaEstimate out = alpha_from_increments(tail);
  out.order.assign(path->order.begin() + static_cast<long>(prefix.size()), path->order.end());
  return out;
}

inline void absorb(AlphaEstimate& into, const AlphaEstimate& a) {
  const bool infinite = into.infinite || a.infinite;
  if (a.alpha > into.alpha || into.increments.empty()) into = a;
  into.infinite = infinite;
}

}  // namespace detail

/// Orders `pool` greedily for `target` (after an optional forced prefix)
/// and measures alpha on the resulting increments.
inline AlphaEstimate empirical_alpha(const DIEvaluator& eval, NodeId target, const ParentSet& pool,
                                     const std::vector<NodeId>& forced_prefix = {}) {
  if (pool.size() < 2) throw ValidationError("alpha needs a pool of at least two processes");
  return detail::path_alpha(eval, target, pool, forced_prefix);
}

/// 1 - exp(-L / beta) with beta = sum_{i<K} alpha^i.
inline double greedy_bound_coefficient(double alpha, int K, int L) {
  if (!(alpha > 0) || K < 1 || L < 1) {
    throw ValidationError("greedy bound needs alpha > 0, K >= 1 and L >= 1");
  }
  if (std::isinf(alpha)) return K == 1 ? 1.0 - std::exp(-static_cast<double>(L)) : 0.0;
  double beta = 0.0;
  double power = 1.0;
  for (int i = 0; i < K; ++i) {
    beta += power;
    power *= alpha;
  }
  return 1.0 - std::exp(-static_cast<double>(L) / beta);
}

/// (alpha^L - 1) / (alpha^K - 1), the share of a size-K optimum guaranteed
/// by the best size-L set; L / K at alpha = 1.
inline double degree_gap_coefficient(double alpha, int K, int L) {
  if (!(alpha > 0) || K < 1 || L < 1) {
    throw ValidationError("degree gap needs alpha > 0, K >= 1 and L >= 1");
  }
  if (L > K) throw ValidationError("degree gap needs L <= K");
  if (L == K) return 1.0;
  if (std::isinf(alpha)) return 0.0;
  if (std::abs(alpha - 1.0) < 1e-12) return static_cast<double>(L) / K;
  // ratio of geometric sums, stable near alpha = 1
  double num = 0.0, den = 0.0, power = 1.0;
  for (int i = 0; i < K; ++i) {
    if (i < L) num += power;
    den += power;
    power *= alpha;
  }
  return num / den;
}

/// Maximum of sum_{i<=K} b_i subject to sum_{i<=L} b_i <= c and
/// 0 <= b_i <= alpha b_{i-1}.
inline double ratio_lp_optimum(double alpha, int K, int L, double c) {
  if (!(alpha > 1)) throw ValidationError("closed form needs alpha > 1");
  if (K < 1 || L < 1 || L > K) throw ValidationError("closed form needs 1 <= L <= K");
  if (!(c > 0)) throw ValidationError("closed form needs c > 0");
  return c * (1.0 - std::pow(alpha, K)) / (1.0 - std::pow(alpha, L));
}

struct BoundCheck {
  AlphaEstimate alpha;
  double coefficient = 0.0;
  double lhs = 0.0;  // approximation score
  double rhs = 0.0;  // coefficient * reference score
  bool holds = false;
};

namespace detail {

inline bool holds_with_slack(double lhs, double rhs) {
  return lhs >= rhs - 1e-12 * std::max(1.0, std::abs(rhs));
}

}  // namespace detail

/// Greedy-versus-optimal bound for the unconstrained class. Alpha is
/// measured, for every node and every l < L, on the greedy order of
/// A_K(i) u B_l(i) after the first l greedy picks B_l(i).
inline BoundCheck check_greedy_bound(const DIEvaluator& eval, const ParentAssignment& greedy,
                                     const ParentAssignment& optimal, int K, int L) {
  BoundCheck out;
  for (NodeId i = 0; i < eval.m(); ++i) {
    const auto order = greedy_parent_set(eval, i, L).order;
    for (int l = 0; l < L; ++l) {
      std::vector<NodeId> prefix(order.begin(), order.begin() + l);
      detail::absorb(out.alpha, detail::path_alpha(eval, i, optimal[i], prefix));
    }
  }
  out.coefficient = greedy_bound_coefficient(std::max(out.alpha.alpha, kZeroIncrement), K, L);
  out.lhs = evaluate_score(greedy, eval);
  out.rhs = out.coefficient * evaluate_score(optimal, eval);
  out.holds = detail::holds_with_slack(out.lhs, out.rhs);
  return out;
}

/// Greedy-versus-optimal bound for the connected class. Alpha is measured
/// on the edges of the optimal tree: for edge j -> i and every l < L, on
/// the greedy order of A~(i, j) u B~_l after the seeded prefix B~_l.
inline BoundCheck check_connected_greedy_bound(const DIEvaluator& eval,
                                               const ScoredApproximation& greedy,
                                               const ScoredApproximation& optimal, int K, int L) {
  BoundCheck out;
  for (NodeId i = 0; i < eval.m(); ++i) {
    if (optimal.assignment[i].empty()) continue;
    std::vector<NodeId> seed;
    if (optimal.tree_parent[i]) seed.push_back(*optimal.tree_parent[i]);
    const auto order = greedy_parent_set(eval, i, L, seed).order;
    for (int l = 0; l < L; ++l) {
      std::vector<NodeId> prefix(order.begin(), order.begin() + l);
      detail::absorb(out.alpha, detail::path_alpha(eval, i, optimal.assignment[i], prefix));
    }
  }
  out.coefficient = greedy_bound_coefficient(std::max(out.alpha.alpha, kZeroIncrement), K, L);
  out.lhs = evaluate_score(greedy.assignment, eval);
  out.rhs = out.coefficient * evaluate_score(optimal.assignment, eval);
  out.holds = detail::holds_with_slack(out.lhs, out.rhs);
  return out;
}

/// Best size-L score against best size-K score, with alpha measured on the
/// greedy order of each optimal size-K set (raised to just above 1).
inline BoundCheck check_degree_gap(const DIEvaluator& eval, const ParentAssignment& optimal_L,
                                   const ParentAssignment& optimal_K, int K, int L) {
  BoundCheck out;
  for (NodeId i = 0; i < eval.m(); ++i) {
    detail::absorb(out.alpha, detail::path_alpha(eval, i, optimal_K[i], {}));
  }
  const double alpha = std::max(out.alpha.alpha, 1.0 + 1e-9);
  out.coefficient = degree_gap_coefficient(alpha, K, L);
  out.lhs = evaluate_score(optimal_L, eval);
  out.rhs = out.coefficient * evaluate_score(optimal_K, eval);
  out.holds = detail::holds_with_slack(out.lhs, out.rhs);
  return out;
}

struct BoundRow {
  double alpha;
  int K;
  int L;
  double coefficient;
};

enum class BoundKind { greedy, degree_gap };

/// Coefficient table over a grid; degree-gap rows only for L <= K.
inline std::vector<BoundRow> bound_table(const std::vector<double>& alphas,
                                         const std::vector<int>& Ks, const std::vector<int>& Ls,
                                         BoundKind kind) {
  std::vector<BoundRow> rows;
  for (double a : alphas) {
    for (int K : Ks) {
      for (int L : Ls) {
        if (kind == BoundKind::degree_gap && L > K) continue;
        const double c = kind == BoundKind::greedy ? greedy_bound_coefficient(a, K, L)
                                                    : degree_gap_coefficient(a, K, L);
        rows.push_back({a, K, L, c});
      }
    }
  }
  return rows;
}

}  // namespace digapprox

#endif  // DIGAPPROX_BOUNDS_HPP
