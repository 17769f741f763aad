#ifndef DIGAPPROX_DI_ESTIMATION_HPP
#define DIGAPPROX_DI_ESTIMATION_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "digapprox/errors.hpp"
#include "digapprox/graph_core.hpp"
#include "digapprox/linear_model.hpp"
#include "digapprox/panel.hpp"

namespace digapprox {

enum class EstimatorKind { gaussian, discrete };
enum class Units { nats, bits };

struct EstimatorConfig {
  int markov_order = 1;
  EstimatorKind estimator = EstimatorKind::gaussian;
  Units units = Units::nats;
  bool intercept = false;
  double max_state_cells = 1e6;
};

inline double convert_units(double nats, Units units) {
  return units == Units::bits ? nats / std::log(2.0) : nats;
}

/// Sum of chain-rule increments I(X_{j_l} -> X_i || X_{j_1..j_{l-1}}).
inline double di_chain_rule(std::span<const double> increments) {
  return std::accumulate(increments.begin(), increments.end(), 0.0);
}

inline double di_chain_rule(const std::vector<double>& increments) {
  return di_chain_rule(std::span<const double>(increments));
}

namespace detail {

inline void validate_di_query(std::size_t m, NodeId target, const ParentSet& addition,
                              const ParentSet& conditioning) {
  validate_parent_set(static_cast<int>(m), target, addition);
  validate_parent_set(static_cast<int>(m), target, conditioning);
  for (NodeId j : addition) {
    if (contains(conditioning, j)) {
      throw ValidationError("process " + std::to_string(j + 1) +
                            " appears in both the addition and the conditioning set");
    }
  }
}

inline double residual_sum_of_squares(const TimeSeriesPanel& panel, NodeId target,
                                      const ParentSet& processes, int lags, bool intercept) {
  const std::size_t N = panel.n() - lags;
  const auto p = static_cast<Eigen::Index>(processes.size() * lags + (intercept ? 1 : 0));
  if (static_cast<std::size_t>(p) >= N) {
    throw ValidationError("insufficient samples: " + std::to_string(N) + " rows for " +
                          std::to_string(p) + " regressors");
  }
  Eigen::MatrixXd X(static_cast<Eigen::Index>(N), p);
  Eigen::VectorXd y(static_cast<Eigen::Index>(N));
  const auto target_series = panel.series(target);
  for (std::size_t r = 0; r < N; ++r) y(r) = target_series[r + lags];
  Eigen::Index col = 0;
  for (NodeId proc : processes) {
    const auto s = panel.series(proc);
    for (int d = 1; d <= lags; ++d, ++col) {
      for (std::size_t r = 0; r < N; ++r) X(r, col) = s[r + lags - d];
    }
  }
  if (intercept) X.col(col).setOnes();
  if (p == 0) return y.squaredNorm();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) {
    throw NumericalError("singular design: regressors for target " + std::to_string(target + 1) +
                         " are linearly dependent");
  }
  const Eigen::VectorXd beta = qr.solve(y);
  return (y - X * beta).squaredNorm();
}

}  // namespace detail

/// Least-squares estimate of ln(sigma_reduced / sigma_full), where the
/// reduced model regresses X_target,t on lags of target and conditioning and
/// the full model adds lags of `addition`.
inline double estimate_di_gaussian(const TimeSeriesPanel& panel, NodeId target,
                                   const ParentSet& addition, const ParentSet& conditioning,
                                   const EstimatorConfig& config = {}) {
  if (panel.kind() != PanelKind::real_valued) {
    throw ValidationError("Gaussian estimator needs a real-valued panel");
  }
  const ParentSet add = canonical(addition);
  const ParentSet cond = canonical(conditioning);
  detail::validate_di_query(panel.m(), target, add, cond);
  const int l = config.markov_order;
  if (l < 1) throw ValidationError("markov order must be >= 1");
  if (panel.n() <= static_cast<std::size_t>(l)) {
    throw ValidationError("insufficient samples: n <= markov order");
  }
  if (add.empty()) return 0.0;
  const ParentSet reduced = with_member(cond, target);
  const ParentSet full = set_union(reduced, add);
  const double rss_full = detail::residual_sum_of_squares(panel, target, full, l, config.intercept);
  const double rss_reduced =
      detail::residual_sum_of_squares(panel, target, reduced, l, config.intercept);
  if (!(rss_full > 0)) throw NumericalError("singular design: zero residual variance");
  // Nested least squares: rss_reduced >= rss_full up to rounding.
  return convert_units(std::max(0.0, 0.5 * std::log(rss_reduced / rss_full)), config.units);
}

/// Maximum-likelihood plug-in estimate of the per-step conditional mutual
/// information I(X_A^{t-l..t-1}; X_i,t | X_{i u C}^{t-l..t-1}).
inline double estimate_di_discrete(const TimeSeriesPanel& panel, NodeId target,
                                   const ParentSet& addition, const ParentSet& conditioning,
                                   const EstimatorConfig& config = {}) {
  if (panel.kind() != PanelKind::finite_alphabet) {
    throw ValidationError("plug-in estimator needs a finite-alphabet panel");
  }
  const ParentSet add = canonical(addition);
  const ParentSet cond = canonical(conditioning);
  detail::validate_di_query(panel.m(), target, add, cond);
  const int l = config.markov_order;
  if (l < 1) throw ValidationError("markov order must be >= 1");
  if (panel.n() <= static_cast<std::size_t>(l)) {
    throw ValidationError("insufficient samples: n <= markov order");
  }
  if (add.empty()) return 0.0;
  const ParentSet reduced = with_member(cond, target);
  const auto a = static_cast<std::uint64_t>(panel.alphabet_size());
  const double cells =
      std::pow(static_cast<double>(a),
               1.0 + static_cast<double>(l) * static_cast<double>(reduced.size() + add.size()));
  if (cells > config.max_state_cells) {
    throw ValidationError("state space too large: " + std::to_string(cells) + " cells exceed " +
                          std::to_string(config.max_state_cells));
  }
  std::uint64_t aw = 1;
  for (std::size_t k = 0; k < add.size() * static_cast<std::size_t>(l); ++k) aw *= a;

  auto encode = [&](const ParentSet& procs, std::size_t t) {
    std::uint64_t code = 0;
    for (NodeId p : procs) {
      for (int d = 1; d <= l; ++d) code = code * a + static_cast<std::uint64_t>(panel(p, t - d));
    }
    return code;
  };

  std::unordered_map<std::uint64_t, std::uint64_t> c_yzw, c_zw, c_yz, c_z;
  const std::size_t N = panel.n() - l;
  for (std::size_t t = l; t < panel.n(); ++t) {
    const std::uint64_t z = encode(reduced, t);
    const std::uint64_t w = encode(add, t);
    const auto y = static_cast<std::uint64_t>(panel(target, t));
    const std::uint64_t zw = z * aw + w;
    ++c_yzw[zw * a + y];
    ++c_zw[zw];
    ++c_yz[z * a + y];
    ++c_z[z];
  }
  double info = 0.0;
  for (const auto& [key, count] : c_yzw) {
    const std::uint64_t y = key % a;
    const std::uint64_t zw = key / a;
    const std::uint64_t z = zw / aw;
    const double num = static_cast<double>(count) * static_cast<double>(c_z.at(z));
    const double den = static_cast<double>(c_zw.at(zw)) * static_cast<double>(c_yz.at(z * a + y));
    info += static_cast<double>(count) * std::log(num / den);
  }
  info /= static_cast<double>(N);
  return convert_units(std::max(0.0, info), config.units);
}

inline double estimate_di(const TimeSeriesPanel& panel, NodeId target, const ParentSet& addition,
                          const ParentSet& conditioning, const EstimatorConfig& config = {}) {
  return config.estimator == EstimatorKind::gaussian
             ? estimate_di_gaussian(panel, target, addition, conditioning, config)
             : estimate_di_discrete(panel, target, addition, conditioning, config);
}

/// Exact per-step directed information of a stationary linear-Gaussian
/// network. Builds the stationary covariance on every call; reuse a
/// GaussianProjectionOracle for repeated queries.
inline double exact_di_gaussian(const LinearNetworkModel& model, NodeId target,
                                const ParentSet& addition, const ParentSet& conditioning,
                                int lags = 1) {
  const ParentSet add = canonical(addition);
  const ParentSet cond = canonical(conditioning);
  detail::validate_di_query(static_cast<std::size_t>(model.m()), target, add, cond);
  if (add.empty()) {
    validate_model(model);
    return 0.0;
  }
  return GaussianProjectionOracle(model, lags).directed_information(target, add, cond);
}

}  // namespace digapprox

#endif  // DIGAPPROX_DI_ESTIMATION_HPP
