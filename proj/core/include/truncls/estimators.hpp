#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "truncls/dataset.hpp"
#include "truncls/truncation.hpp"

namespace truncls {

/// Minimum-norm least squares over the rows named by `subset`. The returned
/// coefficients lie in the span of the selected feature rows.
Eigen::VectorXd least_squares_fit(const Dataset& data,
                                  std::span<const Eigen::Index> subset);

/// Minimum-norm least squares over the full sample.
Eigen::VectorXd least_squares_fit(const Dataset& data);

/// argmin over theta of (1/n) sum_i (<theta, x_i> - y_i)^2 + lambda*|theta|^2.
/// At lambda = 0 this coincides with least_squares_fit.
Eigen::VectorXd ridge_fit(const Dataset& data, double lambda);

/// Soft-truncated mean at confidence epsilon:
///   (1/(n*lam)) * sum_i log(1 + lam*y_i + lam^2*y_i^2/2),
/// with lam = sqrt(2*log(1/epsilon)/n). Every log argument is >= 1/2, so the
/// value is always finite. Throws std::domain_error unless 0 < epsilon < 1.
double robust_mean(const Eigen::VectorXd& ys, double epsilon);

/// One accepted step of the min-max loop.
struct IterationRecord {
  Eigen::VectorXd theta;              ///< iterate theta_k
  std::vector<Eigen::Index> support;  ///< active index set I_k, ascending
  /// (eta, ell) elected at this step; unset when the loop ended before a
  /// candidate was elected.
  std::optional<std::pair<double, int>> chosen;
};

/// Result of a truncated fit (or of a baseline fit packaged for comparison).
struct FitResult {
  Eigen::VectorXd theta;
  std::vector<Eigen::Index> support;  ///< final active index set
  std::vector<IterationRecord> trace;
  double alpha_used = 0.0;
  double lambda_used = 0.0;
  bool equals_erm = true;  ///< stopped at the end of the first iteration

  Eigen::Index iterations() const {
    return static_cast<Eigen::Index>(trace.size());
  }
};

/// Default ranks of the sorted influence scores used as eta candidates.
inline constexpr int kDefaultEtaRanks[] = {1, 5, 25};

/// Iterative min-max truncated estimator.
///
/// Starting from the (ridge-)penalized empirical minimizer on the full
/// sample, each step scores the active points, proposes trimmed index sets
/// from the requested score ranks, refits on each proposal (plus a
/// readjusted variant), and elects the candidate minimizing the worst
/// criterion value against all previous iterates. The loop stops when the
/// elected candidate no longer improves on every previous iterate, when the
/// active set stops shrinking, or after n steps.
FitResult minmax_truncated_fit(
    const Dataset& data, const TruncationParams& params,
    std::span<const int> eta_ranks = kDefaultEtaRanks);

/// Geometric grid of truncation scales:
/// center * ratio^j for j in [first_offset, first_offset + count).
/// The default shape places `center` at the top of the grid.
struct AlphaGrid {
  double center = 1.0;
  double ratio = 3.0;
  int count = 8;
  int first_offset = -7;

  /// Ascending grid values; throws std::invalid_argument on an invalid grid.
  std::vector<double> points() const;
};

/// Runs minmax_truncated_fit at each alpha in increasing order and returns
/// the first result that moved away from the empirical minimizer; when none
/// does, returns the (k = 1) fit from the last alpha, which at lambda = 0 is
/// exactly the ordinary least squares fit.
FitResult select_alpha_over_points(
    const Dataset& data, double lambda, std::span<const double> alphas,
    std::span<const int> eta_ranks = kDefaultEtaRanks);

/// Full selection procedure: rescale `grid` so its top sits at 0.45/s2,
/// where s2 estimates the residual variance of the ordinary least squares
/// fit, and scan it with select_alpha_over_points. s2 is the geometric mean
/// of the moment estimate (mean squared residual) and a median-based
/// estimate; the blend keeps the truncation scale useful when a few huge
/// residuals inflate the moment estimate, without overreacting on clean
/// data. Exact interpolation (zero residuals) skips the scan and returns
/// the least squares fit directly.
FitResult select_alpha_and_fit(
    const Dataset& data, double lambda = 0.0, AlphaGrid grid = {},
    std::span<const int> eta_ranks = kDefaultEtaRanks);

}  // namespace truncls
