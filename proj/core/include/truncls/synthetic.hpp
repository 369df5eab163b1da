#pragma once

#include <Eigen/Dense>

#include "truncls/dataset.hpp"
#include "truncls/rng.hpp"

namespace truncls {

enum class NoiseKind {
  kGaussian,              ///< standard normal
  kHeavyTailed,           ///< sign(V) / |V|^(1/q), V standard normal
  kAsymHeavyTailed,       ///< |V|^(-1/q) if V > 0, else -q/(q-1)
  kDiracGaussianMixture,  ///< point mass at sqrt((1-rho)/p) w.p. p, else Gaussian
};

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kGaussian;
  double q = 2.01;  ///< tail exponent, > 2 (at q = 2 the second moment diverges)
  double p = 0.005; ///< mixture point-mass probability
  double rho = 0.1; ///< share of the mixture variance carried by the Gaussian part

  /// Throws std::invalid_argument on out-of-range parameters. For the
  /// mixture, rho >= p is exactly the condition for the Gaussian part to
  /// have non-negative variance.
  void validate() const;

  double mixture_dirac() const;       ///< sqrt((1-rho)/p)
  double mixture_gauss_mean() const;  ///< -sqrt(p(1-rho))/(1-p)
  double mixture_gauss_var() const;   ///< rho/(1-p) - p(1-rho)/(1-p)^2
};

enum class DesignKind {
  kInc,  ///< independent standard normal covariates, Q = I
  kHcc,  ///< correlated Gaussian covariates, Q = A A' with A uniform [0,1]
  kTs,   ///< trigonometric features of a uniform input, Q = I/2
};

/// A synthetic scenario with exact excess-risk evaluation. theta_star is the
/// population projection of the target onto the feature span, so the excess
/// risk of any theta is (theta - theta_star)' Q (theta - theta_star).
struct DesignOracle {
  DesignKind kind = DesignKind::kInc;
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  Eigen::VectorXd theta_star;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd mixing;  ///< HCC only: the A with gram = A A'; empty otherwise
  double noise_sigma = 10.0;
  NoiseSpec noise;
};

/// One draw of the noise variable W.
double sample_noise(const NoiseSpec& spec, Rng& rng);

/// Builds the scenario oracle. HCC draws its mixing matrix from `rng` (one
/// draw per oracle, so every replication carries its own exact Gram matrix).
/// TS requires an even d.
DesignOracle build_oracle(DesignKind kind, Eigen::Index n, Eigen::Index d,
                          const NoiseSpec& noise, Rng& rng,
                          double noise_sigma = 10.0);

/// Trigonometric feature row (cos 2piu, .., cos d*pi*u, sin 2piu, .., sin d*pi*u).
Eigen::VectorXd ts_features(double u, Eigen::Index d);

/// The TS regression target 20u^2 - 10u - 5/3.
double ts_target(double u);

/// Draws oracle.n observations. INC/HCC outputs are <theta_star, x> + sigma*W;
/// TS outputs are the quadratic target plus sigma*W.
Dataset generate_dataset(const DesignOracle& oracle, Rng& rng);

/// Exact excess risk (theta - theta_star)' Q (theta - theta_star).
double excess_risk(const DesignOracle& oracle, const Eigen::VectorXd& theta);

}  // namespace truncls
