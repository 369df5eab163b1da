#include "truncls/truncation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace truncls {

void TruncationParams::validate() const {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw std::invalid_argument("truncation params: alpha must be positive and finite");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("truncation params: lambda must be non-negative and finite");
  }
}

double psi(double x) {
  if (std::isnan(x) || std::isinf(x)) {
    throw std::domain_error("psi: non-finite input");
  }
  if (x < 0.0) return -psi(-x);
  if (x >= 1.0) return std::numbers::ln2;
  // 1 - x + x^2/2 lies in [1/2, 1] on this branch.
  return -std::log1p(-x + 0.5 * x * x);
}

double criterion(const Eigen::VectorXd& theta,
                 const Eigen::VectorXd& theta_prime, const Dataset& data,
                 const TruncationParams& params) {
  params.validate();
  const Eigen::Index d = data.d();
  if (theta.size() != d || theta_prime.size() != d) {
    throw std::invalid_argument("criterion: coefficient length does not match data");
  }
  const double n = static_cast<double>(data.n());
  double value =
      n * params.alpha * params.lambda * (theta.squaredNorm() - theta_prime.squaredNorm());
  const Eigen::VectorXd r = data.ys - data.xs * theta;
  const Eigen::VectorXd r_prime = data.ys - data.xs * theta_prime;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    value += psi(params.alpha * (r[i] * r[i] - r_prime[i] * r_prime[i]));
  }
  return value;
}

double penalized_risk_subset(const Eigen::VectorXd& theta,
                             std::span<const Eigen::Index> subset,
                             const Dataset& data,
                             const TruncationParams& params) {
  params.validate();
  if (theta.size() != data.d()) {
    throw std::invalid_argument("penalized_risk_subset: coefficient length mismatch");
  }
  if (subset.empty()) {
    throw std::invalid_argument("penalized_risk_subset: empty subset");
  }
  double sum = 0.0;
  for (const Eigen::Index i : subset) {
    if (i < 0 || i >= data.n()) {
      throw std::invalid_argument("penalized_risk_subset: index out of range");
    }
    const double r = data.xs.row(i).dot(theta) - data.ys[i];
    sum += r * r;
  }
  return params.lambda * theta.squaredNorm() + sum / static_cast<double>(subset.size());
}

double influence_score(Eigen::Index i, const Eigen::VectorXd& theta_hat,
                       const Eigen::MatrixXd& q_hat_inv, const Dataset& data,
                       const TruncationParams& params) {
  params.validate();
  if (i < 0 || i >= data.n()) {
    throw std::invalid_argument("influence_score: index out of range");
  }
  if (theta_hat.size() != data.d() || q_hat_inv.rows() != data.d() ||
      q_hat_inv.cols() != data.d()) {
    throw std::invalid_argument("influence_score: shape mismatch");
  }
  const auto x = data.xs.row(i).transpose();
  const double m = x.dot(q_hat_inv * x);
  const double r = x.dot(theta_hat) - data.ys[i];
  const double loss = params.alpha * r * r;
  // L (1 + sqrt(1 + 1/L))^2 = 1 + 2L + 2 sqrt(L(L+1)), exact at L = 0.
  return m * (1.0 + 2.0 * loss + 2.0 * std::sqrt(loss * (loss + 1.0)));
}

}  // namespace truncls
