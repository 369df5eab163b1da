#pragma once

#include <Eigen/Dense>
#include <span>

#include "truncls/dataset.hpp"

namespace truncls {

/// Scale and ridge parameters of the truncated criterion.
struct TruncationParams {
  double alpha = 1.0;   ///< scale applied to squared-loss differences, > 0
  double lambda = 0.0;  ///< ridge weight, >= 0

  /// Throws std::invalid_argument unless alpha > 0 and lambda >= 0, both finite.
  void validate() const;
};

/// Soft truncation function:
///   psi(x) = -log(1 - x + x^2/2)  for 0 <= x <= 1,
///            log 2                for x >= 1,
///            -psi(-x)             for x <= 0.
/// Continuous, odd, non-decreasing, bounded in [-log 2, log 2].
/// Throws std::domain_error on non-finite input.
double psi(double x);

/// Penalized truncated criterion over the full sample:
///   D(t, t') = n*alpha*lambda*(|t|^2 - |t'|^2)
///              + sum_i psi(alpha*r_i(t)^2 - alpha*r_i(t')^2),
/// where r_i(t) = y_i - <t, x_i>.
double criterion(const Eigen::VectorXd& theta,
                 const Eigen::VectorXd& theta_prime, const Dataset& data,
                 const TruncationParams& params);

/// Ridge-penalized mean squared residual over an index subset:
///   r_I(t) = lambda*|t|^2 + (1/|I|) * sum_{i in I} (<t, x_i> - y_i)^2.
/// Throws std::invalid_argument on an empty subset or out-of-range index.
double penalized_risk_subset(const Eigen::VectorXd& theta,
                             std::span<const Eigen::Index> subset,
                             const Dataset& data,
                             const TruncationParams& params);

/// Influence score of point i at the current iterate:
///   L_i * x_i' Qinv x_i * (1 + sqrt(1 + 1/L_i))^2,  L_i = alpha * r_i^2.
/// Up to the alpha scale this is the squared reciprocal distance from
/// theta_hat to the nearest hyperplane where point i's truncated loss
/// contribution changes regime. Evaluated through the equivalent form
/// m * (1 + 2L + 2*sqrt(L(L+1))), which is exact at L = 0 (limit value m).
/// `q_hat_inv` is the (pseudo-)inverse of the current second-moment matrix.
double influence_score(Eigen::Index i, const Eigen::VectorXd& theta_hat,
                       const Eigen::MatrixXd& q_hat_inv, const Dataset& data,
                       const TruncationParams& params);

}  // namespace truncls
