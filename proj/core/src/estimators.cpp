#include "truncls/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "truncls/moments.hpp"

namespace truncls {

namespace {

std::pair<Eigen::MatrixXd, Eigen::VectorXd> gather_rows(
    const Dataset& data, std::span<const Eigen::Index> subset) {
  Eigen::MatrixXd xs(static_cast<Eigen::Index>(subset.size()), data.d());
  Eigen::VectorXd ys(static_cast<Eigen::Index>(subset.size()));
  Eigen::Index row = 0;
  for (const Eigen::Index i : subset) {
    if (i < 0 || i >= data.n()) {
      throw std::invalid_argument("fit subset: index out of range");
    }
    xs.row(row) = data.xs.row(i);
    ys[row] = data.ys[i];
    ++row;
  }
  return {std::move(xs), std::move(ys)};
}

// argmin of lambda*|t|^2 + (1/|I|) sum_{i in I} (<t, x_i> - y_i)^2; the
// minimum-norm minimizer when lambda = 0.
Eigen::VectorXd subset_fit(const Dataset& data,
                           std::span<const Eigen::Index> subset,
                           double lambda) {
  if (subset.empty()) {
    throw std::invalid_argument("fit subset: empty subset");
  }
  auto [xs, ys] = gather_rows(data, subset);
  if (lambda == 0.0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.solve(ys);
  }
  const double m = static_cast<double>(subset.size());
  Eigen::MatrixXd a = xs.transpose() * xs / m;
  a.diagonal().array() += lambda;
  return a.ldlt().solve(xs.transpose() * ys / m);
}

std::vector<Eigen::Index> all_indices(Eigen::Index n) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  return idx;
}

// alpha-scaled squared residuals over the full sample.
Eigen::VectorXd scaled_losses(const Dataset& data, const Eigen::VectorXd& theta,
                              double alpha) {
  return alpha * (data.xs * theta - data.ys).array().square();
}

// Criterion value against a reference iterate, both given by their scaled
// loss vectors and squared norms.
double criterion_against(const Eigen::VectorXd& losses, double sq_norm,
                         const Eigen::VectorXd& ref_losses, double ref_sq_norm,
                         double n_alpha_lambda) {
  double value = n_alpha_lambda * (sq_norm - ref_sq_norm);
  for (Eigen::Index i = 0; i < losses.size(); ++i) {
    value += psi(losses[i] - ref_losses[i]);
  }
  return value;
}

struct Candidate {
  double eta = 0.0;
  int ell = 0;
  std::vector<Eigen::Index> support;
  Eigen::VectorXd theta;
  Eigen::VectorXd losses;
  double sq_norm = 0.0;
  double worst = 0.0;  ///< max criterion against the recorded iterates
};

// Smaller worst value wins; ties prefer the readjusted fit (ell = 2), then
// the smaller eta.
bool better_candidate(const Candidate& a, const Candidate& b) {
  if (a.worst != b.worst) return a.worst < b.worst;
  if (a.ell != b.ell) return a.ell > b.ell;
  return a.eta < b.eta;
}

}  // namespace

Eigen::VectorXd least_squares_fit(const Dataset& data,
                                  std::span<const Eigen::Index> subset) {
  return subset_fit(data, subset, 0.0);
}

Eigen::VectorXd least_squares_fit(const Dataset& data) {
  const auto idx = all_indices(data.n());
  return subset_fit(data, idx, 0.0);
}

Eigen::VectorXd ridge_fit(const Dataset& data, double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("ridge_fit: lambda must be non-negative and finite");
  }
  const auto idx = all_indices(data.n());
  return subset_fit(data, idx, lambda);
}

double robust_mean(const Eigen::VectorXd& ys, double epsilon) {
  if (ys.size() < 1) {
    throw std::invalid_argument("robust_mean: empty sample");
  }
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::domain_error("robust_mean: epsilon must lie in (0, 1)");
  }
  const double n = static_cast<double>(ys.size());
  const double lam = std::sqrt(2.0 * std::log(1.0 / epsilon) / n);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ys.size(); ++i) {
    const double t = lam * ys[i];
    sum += std::log1p(t + 0.5 * t * t);  // argument of log is >= 1/2
  }
  return sum / (n * lam);
}

FitResult minmax_truncated_fit(const Dataset& data,
                               const TruncationParams& params,
                               std::span<const int> eta_ranks) {
  params.validate();
  data.validate();
  if (eta_ranks.empty()) {
    throw std::invalid_argument("minmax_truncated_fit: empty eta rank list");
  }
  for (const int r : eta_ranks) {
    if (r < 1) throw std::invalid_argument("minmax_truncated_fit: ranks are 1-based");
  }

  const Eigen::Index n = data.n();
  const double n_alpha_lambda =
      static_cast<double>(n) * params.alpha * params.lambda;

  FitResult result;
  result.alpha_used = params.alpha;
  result.lambda_used = params.lambda;

  std::vector<Eigen::Index> active = all_indices(n);
  Eigen::VectorXd theta = subset_fit(data, active, params.lambda);
  result.trace.push_back({theta, active, std::nullopt});

  // Scaled loss vector and squared norm of every recorded iterate, for the
  // minimax tests.
  std::vector<Eigen::VectorXd> trace_losses{scaled_losses(data, theta, params.alpha)};
  std::vector<double> trace_sq_norms{theta.squaredNorm()};

  for (Eigen::Index step = 1; step < n; ++step) {
    const Eigen::VectorXd& theta_k = result.trace.back().theta;
    const auto m = static_cast<Eigen::Index>(active.size());

    auto [xs_k, ys_k] = gather_rows(data, active);
    const Eigen::MatrixXd q_k = xs_k.transpose() * xs_k / static_cast<double>(m);
    const Eigen::MatrixXd q_inv = pseudo_inverse(q_k);

    // Influence scores of the active points.
    const Eigen::VectorXd resid_k = xs_k * theta_k - ys_k;
    Eigen::VectorXd scores(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double mj = xs_k.row(j) * q_inv * xs_k.row(j).transpose();
      const double loss = params.alpha * resid_k[j] * resid_k[j];
      scores[j] = mj * (1.0 + 2.0 * loss + 2.0 * std::sqrt(loss * (loss + 1.0)));
    }

    // eta thresholds: score values at the requested ranks, largest first.
    std::vector<double> sorted(scores.data(), scores.data() + m);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<double> etas;
    for (const int rank : eta_ranks) {
      const auto clipped = std::min<Eigen::Index>(rank, m);
      const double eta = sorted[static_cast<std::size_t>(clipped - 1)];
      if (std::find(etas.begin(), etas.end(), eta) == etas.end()) {
        etas.push_back(eta);
      }
    }

    const Eigen::VectorXd losses_k = params.alpha * resid_k.array().square();

    std::vector<Candidate> candidates;
    for (const double eta : etas) {
      std::vector<Eigen::Index> j1;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (scores[j] < eta) j1.push_back(active[static_cast<std::size_t>(j)]);
      }
      if (j1.empty()) continue;

      Candidate first{eta, 1, std::move(j1), {}, {}, 0.0, 0.0};
      first.theta = subset_fit(data, first.support, params.lambda);

      // Readjusted sample: active points whose truncated contribution did
      // not change regime between theta_k and the trimmed fit.
      std::vector<Eigen::Index> j2;
      for (Eigen::Index j = 0; j < m; ++j) {
        const double r1 = xs_k.row(j).dot(first.theta) - ys_k[j];
        const double l1 = params.alpha * r1 * r1;
        if (std::abs(l1 - losses_k[j]) <= 1.0) {
          j2.push_back(active[static_cast<std::size_t>(j)]);
        }
      }
      candidates.push_back(std::move(first));
      if (!j2.empty()) {
        Candidate second{eta, 2, std::move(j2), {}, {}, 0.0, 0.0};
        second.theta = subset_fit(data, second.support, params.lambda);
        candidates.push_back(std::move(second));
      }
    }

    const Candidate* best = nullptr;
    for (Candidate& cand : candidates) {
      if (!cand.theta.allFinite()) continue;
      cand.losses = scaled_losses(data, cand.theta, params.alpha);
      if (!cand.losses.allFinite()) continue;
      cand.sq_norm = cand.theta.squaredNorm();
      cand.worst = criterion_against(cand.losses, cand.sq_norm, trace_losses[0],
                                     trace_sq_norms[0], n_alpha_lambda);
      for (std::size_t j = 1; j < trace_losses.size(); ++j) {
        cand.worst = std::max(
            cand.worst, criterion_against(cand.losses, cand.sq_norm,
                                          trace_losses[j], trace_sq_norms[j],
                                          n_alpha_lambda));
      }
      if (best == nullptr || better_candidate(cand, *best)) best = &cand;
    }
    if (best == nullptr) break;  // no viable candidate: keep theta_k

    result.trace.back().chosen = std::make_pair(best->eta, best->ell);
    // Min-max stop: theta_k stands. The slack keeps rounding dust on
    // near-interpolating fits from registering as an improvement.
    if (best->worst >= -1e-12 * static_cast<double>(n)) break;
    if (best->support.size() >= active.size()) break;  // active set must shrink

    active = best->support;
    result.trace.push_back({best->theta, active, std::nullopt});
    trace_losses.push_back(best->losses);
    trace_sq_norms.push_back(best->sq_norm);
  }

  result.theta = result.trace.back().theta;
  result.support = result.trace.back().support;
  result.equals_erm = result.trace.size() == 1;
  return result;
}

std::vector<double> AlphaGrid::points() const {
  if (!std::isfinite(center) || center <= 0.0) {
    throw std::invalid_argument("alpha grid: center must be positive and finite");
  }
  if (!std::isfinite(ratio) || ratio <= 1.0) {
    throw std::invalid_argument("alpha grid: ratio must exceed 1");
  }
  if (count < 1) {
    throw std::invalid_argument("alpha grid: count must be at least 1");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const double value = center * std::pow(ratio, first_offset + j);
    if (!std::isfinite(value) || value <= 0.0) {
      throw std::invalid_argument("alpha grid: point overflows or underflows");
    }
    values.push_back(value);
  }
  return values;
}

FitResult select_alpha_over_points(const Dataset& data, double lambda,
                                   std::span<const double> alphas,
                                   std::span<const int> eta_ranks) {
  if (alphas.empty()) {
    throw std::invalid_argument("alpha selection: empty grid");
  }
  std::vector<double> ordered(alphas.begin(), alphas.end());
  std::sort(ordered.begin(), ordered.end());
  FitResult fit;
  for (const double alpha : ordered) {
    fit = minmax_truncated_fit(data, {alpha, lambda}, eta_ranks);
    if (!fit.equals_erm) return fit;
  }
  return fit;
}

namespace {

// Median of chi^2_1; rescales a median of squared residuals into a variance
// estimate that is consistent under Gaussian noise.
constexpr double kChiSqMedian = 0.4549364231;

// Top of the default alpha grid, in units of the inverse variance estimate.
// Calibrated on the synthetic suites: large enough that datasets with low
// signal-to-noise points leave the least squares solution, small enough
// that clean Gaussian data essentially never does.
constexpr double kGridTopScale = 0.45;

double median_of_squares(const Eigen::VectorXd& residuals) {
  std::vector<double> sq(static_cast<std::size_t>(residuals.size()));
  for (Eigen::Index i = 0; i < residuals.size(); ++i) {
    sq[static_cast<std::size_t>(i)] = residuals[i] * residuals[i];
  }
  const auto mid = sq.begin() + static_cast<std::ptrdiff_t>(sq.size() / 2);
  std::nth_element(sq.begin(), mid, sq.end());
  if (sq.size() % 2 == 1) return *mid;
  return 0.5 * (*mid + *std::max_element(sq.begin(), mid));
}

}  // namespace

FitResult select_alpha_and_fit(const Dataset& data, double lambda,
                               AlphaGrid grid, std::span<const int> eta_ranks) {
  data.validate();
  const Eigen::VectorXd ols = least_squares_fit(data);
  const Eigen::VectorXd residuals = data.xs * ols - data.ys;
  const double moment = residuals.squaredNorm() / static_cast<double>(data.n());
  const double median = median_of_squares(residuals) / kChiSqMedian;
  // Geometric blend of the two variance estimates; falls back to the moment
  // estimate when half the sample interpolates exactly.
  double sigma2 = median > 0.0 ? std::sqrt(moment * median) : moment;
  // Residuals at the numerical noise floor count as exact interpolation;
  // rescaling them by 1/sigma2 would otherwise turn rounding dust into
  // apparent signal.
  const double output_scale = data.ys.squaredNorm() / static_cast<double>(data.n());
  if (sigma2 <= 1e-24 * output_scale) sigma2 = 0.0;
  if (sigma2 <= 0.0 || !std::isfinite(kGridTopScale / sigma2)) {
    // Exact interpolation: truncation has nothing to remove.
    FitResult result;
    result.theta = ols;
    result.support = all_indices(data.n());
    result.trace.push_back({ols, result.support, std::nullopt});
    result.alpha_used = 1.0;
    result.lambda_used = lambda;
    result.equals_erm = true;
    return result;
  }
  grid.center = kGridTopScale / sigma2;
  const std::vector<double> alphas = grid.points();
  return select_alpha_over_points(data, lambda, alphas, eta_ranks);
}

}  // namespace truncls
