#ifndef DIGAPPROX_LINEAR_MODEL_HPP
#define DIGAPPROX_LINEAR_MODEL_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "digapprox/errors.hpp"
#include "digapprox/graph_core.hpp"

namespace digapprox {

/// First-order vector autoregression X_t = C X_{t-1} + N_t with independent
/// Gaussian noise. Row i of C holds the coefficients feeding process i.
struct LinearNetworkModel {
  Eigen::MatrixXd coefficients;
  Eigen::VectorXd noise_variances;

  int m() const { return static_cast<int>(coefficients.rows()); }
};

inline double spectral_radius(const Eigen::MatrixXd& matrix) {
  if (matrix.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

inline void validate_model(const LinearNetworkModel& model) {
  const auto m = model.coefficients.rows();
  if (m < 1 || model.coefficients.cols() != m) {
    throw ValidationError("coefficient matrix must be square and non-empty");
  }
  if (model.noise_variances.size() != m) {
    throw ValidationError("need one noise variance per process");
  }
  if (!model.coefficients.allFinite()) throw ValidationError("non-finite coefficient");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(model.noise_variances(i) > 0) || !std::isfinite(model.noise_variances(i))) {
      throw ValidationError("noise variances must be positive and finite");
    }
  }
}

/// Solves Sigma = C Sigma C^T + Q by fixed-point iteration from Sigma = Q,
/// stopping when the largest entry update drops below `tolerance`.
inline Eigen::MatrixXd stationary_covariance(const LinearNetworkModel& model,
                                             double tolerance = 1e-12,
                                             long max_iterations = 50'000'000) {
  validate_model(model);
  const double rho = spectral_radius(model.coefficients);
  if (!(rho < 1.0)) {
    throw NumericalError("model is not stationary: spectral radius " + std::to_string(rho));
  }
  const Eigen::MatrixXd& C = model.coefficients;
  const Eigen::MatrixXd Q = model.noise_variances.asDiagonal();
  Eigen::MatrixXd sigma = Q;
  for (long it = 0; it < max_iterations; ++it) {
    Eigen::MatrixXd next = C * sigma * C.transpose() + Q;
    const double delta = (next - sigma).cwiseAbs().maxCoeff();
    sigma = std::move(next);
    if (delta < tolerance) return 0.5 * (sigma + sigma.transpose());
  }
  throw NumericalError("Lyapunov iteration did not converge");
}

/// True parent sets: j is a parent of i when C(i, j) is nonzero, i != j.
inline ParentAssignment true_parents(const LinearNetworkModel& model) {
  const int m = model.m();
  std::vector<ParentSet> parents(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (j != i && model.coefficients(i, j) != 0.0) parents[i].push_back(j);
    }
  }
  return ParentAssignment(std::move(parents));
}

/// Exact directed information for a stationary linear-Gaussian network,
/// using one-step prediction from `lags` lags of the included processes.
class GaussianProjectionOracle {
 public:
  explicit GaussianProjectionOracle(const LinearNetworkModel& model, int lags = 1)
      : m_(model.m()), lags_(lags) {
    if (lags < 1) throw ValidationError("lags must be >= 1");
    const Eigen::MatrixXd sigma = stationary_covariance(model);
    // lag_cov_[k] = Cov(X_t, X_{t-k}) = C^k Sigma
    lag_cov_.push_back(sigma);
    for (int k = 1; k <= lags; ++k) lag_cov_.push_back(model.coefficients * lag_cov_.back());
  }

  int m() const { return m_; }
  const Eigen::MatrixXd& covariance() const { return lag_cov_.front(); }

  /// Variance of X_{target,t} minus its best linear prediction from lags
  /// 1..l of every process in `processes` (canonical).
  double prediction_error_variance(NodeId target, const ParentSet& processes) const {
    const auto dim = static_cast<Eigen::Index>(processes.size()) * lags_;
    const double total = lag_cov_[0](target, target);
    if (dim == 0) return total;
    Eigen::MatrixXd S(dim, dim);
    Eigen::VectorXd c(dim);
    auto slot = [&](std::size_t p, int d) {
      return static_cast<Eigen::Index>(p) * lags_ + (d - 1);
    };
    for (std::size_t a = 0; a < processes.size(); ++a) {
      for (int d = 1; d <= lags_; ++d) {
        c(slot(a, d)) = lag_cov_[d](target, processes[a]);
        for (std::size_t b = 0; b < processes.size(); ++b) {
          for (int e = 1; e <= lags_; ++e) {
            // Cov(X_{p,t-d}, X_{q,t-e})
            S(slot(a, d), slot(b, e)) = e >= d ? lag_cov_[e - d](processes[a], processes[b])
                                               : lag_cov_[d - e](processes[b], processes[a]);
          }
        }
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
      const double ridge = 1e-10 * S.trace();
      S.diagonal().array() += ridge;
      llt.compute(S);
      if (llt.info() != Eigen::Success) {
        throw NumericalError("regularization failure: projection block is not positive definite");
      }
    }
    const double v = total - c.dot(llt.solve(c));
    if (!(v > 0)) throw NumericalError("non-positive prediction error variance");
    return v;
  }

  double directed_information(NodeId target, const ParentSet& addition,
                              const ParentSet& conditioning) const {
    if (addition.empty()) return 0.0;
    const ParentSet reduced = with_member(conditioning, target);
    const ParentSet full = set_union(reduced, addition);
    const double v_reduced = prediction_error_variance(target, reduced);
    const double v_full = prediction_error_variance(target, full);
    return std::max(0.0, 0.5 * std::log(v_reduced / v_full));
  }

 private:
  int m_;
  int lags_;
  std::vector<Eigen::MatrixXd> lag_cov_;
};

}  // namespace digapprox

#endif  // DIGAPPROX_LINEAR_MODEL_HPP
