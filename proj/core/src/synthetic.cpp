#include "truncls/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace truncls {

void NoiseSpec::validate() const {
  switch (kind) {
    case NoiseKind::kGaussian:
      return;
    case NoiseKind::kHeavyTailed:
    case NoiseKind::kAsymHeavyTailed:
      if (!std::isfinite(q) || q <= 2.0) {
        throw std::invalid_argument("noise: q must be strictly larger than 2");
      }
      return;
    case NoiseKind::kDiracGaussianMixture:
      if (!std::isfinite(p) || p <= 0.0 || p >= 1.0) {
        throw std::invalid_argument("noise: p must lie in (0, 1)");
      }
      if (!std::isfinite(rho) || rho < p || rho > 1.0) {
        throw std::invalid_argument("noise: rho must lie in [p, 1]");
      }
      return;
  }
  throw std::invalid_argument("noise: unknown kind");
}

double NoiseSpec::mixture_dirac() const { return std::sqrt((1.0 - rho) / p); }

double NoiseSpec::mixture_gauss_mean() const {
  return -std::sqrt(p * (1.0 - rho)) / (1.0 - p);
}

double NoiseSpec::mixture_gauss_var() const {
  return rho / (1.0 - p) - p * (1.0 - rho) / ((1.0 - p) * (1.0 - p));
}

double sample_noise(const NoiseSpec& spec, Rng& rng) {
  spec.validate();
  switch (spec.kind) {
    case NoiseKind::kGaussian:
      return rng.normal();
    case NoiseKind::kHeavyTailed: {
      double v = rng.normal();
      while (v == 0.0) v = rng.normal();
      const double w = std::pow(std::abs(v), -1.0 / spec.q);
      return v > 0.0 ? w : -w;
    }
    case NoiseKind::kAsymHeavyTailed: {
      const double v = rng.normal();
      if (v > 0.0) return std::pow(v, -1.0 / spec.q);
      return -spec.q / (spec.q - 1.0);
    }
    case NoiseKind::kDiracGaussianMixture: {
      if (rng.uniform() < spec.p) return spec.mixture_dirac();
      return spec.mixture_gauss_mean() +
             std::sqrt(spec.mixture_gauss_var()) * rng.normal();
    }
  }
  throw std::invalid_argument("noise: unknown kind");
}

Eigen::VectorXd ts_features(double u, Eigen::Index d) {
  Eigen::VectorXd x(d);
  const Eigen::Index half = d / 2;
  for (Eigen::Index k = 1; k <= half; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) * u;
    x[k - 1] = std::cos(angle);
    x[half + k - 1] = std::sin(angle);
  }
  return x;
}

double ts_target(double u) { return 20.0 * u * u - 10.0 * u - 5.0 / 3.0; }

DesignOracle build_oracle(DesignKind kind, Eigen::Index n, Eigen::Index d,
                          const NoiseSpec& noise, Rng& rng,
                          double noise_sigma) {
  noise.validate();
  if (n < 1 || d < 1) {
    throw std::invalid_argument("oracle: n and d must be positive");
  }
  if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) {
    throw std::invalid_argument("oracle: sigma must be non-negative");
  }
  DesignOracle oracle;
  oracle.kind = kind;
  oracle.n = n;
  oracle.d = d;
  oracle.noise = noise;
  oracle.noise_sigma = noise_sigma;
  switch (kind) {
    case DesignKind::kInc:
      oracle.theta_star = Eigen::VectorXd::Constant(d, 10.0);
      oracle.gram = Eigen::MatrixXd::Identity(d, d);
      break;
    case DesignKind::kHcc: {
      Eigen::MatrixXd a(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = rng.uniform();
      }
      oracle.mixing = a;
      oracle.gram = a * a.transpose();
      oracle.theta_star = Eigen::VectorXd::Constant(d, 10.0);
      break;
    }
    case DesignKind::kTs: {
      if (d % 2 != 0) {
        throw std::invalid_argument("oracle: the trigonometric design needs an even d");
      }
      const Eigen::Index half = d / 2;
      oracle.theta_star.resize(d);
      const double pi = std::numbers::pi;
      for (Eigen::Index k = 1; k <= half; ++k) {
        const double kk = static_cast<double>(k);
        oracle.theta_star[k - 1] = 20.0 / (pi * pi * kk * kk);
        oracle.theta_star[half + k - 1] = -10.0 / (pi * kk);
      }
      oracle.gram = 0.5 * Eigen::MatrixXd::Identity(d, d);
      break;
    }
  }
  return oracle;
}

Dataset generate_dataset(const DesignOracle& oracle, Rng& rng) {
  Dataset data;
  data.xs.resize(oracle.n, oracle.d);
  data.ys.resize(oracle.n);
  for (Eigen::Index i = 0; i < oracle.n; ++i) {
    double signal = 0.0;
    switch (oracle.kind) {
      case DesignKind::kInc: {
        for (Eigen::Index j = 0; j < oracle.d; ++j) data.xs(i, j) = rng.normal();
        signal = data.xs.row(i).dot(oracle.theta_star);
        break;
      }
      case DesignKind::kHcc: {
        Eigen::VectorXd z(oracle.d);
        for (Eigen::Index j = 0; j < oracle.d; ++j) z[j] = rng.normal();
        data.xs.row(i) = (oracle.mixing * z).transpose();
        signal = data.xs.row(i).dot(oracle.theta_star);
        break;
      }
      case DesignKind::kTs: {
        const double u = rng.uniform();
        data.xs.row(i) = ts_features(u, oracle.d).transpose();
        signal = ts_target(u);
        break;
      }
    }
    data.ys[i] = signal + oracle.noise_sigma * sample_noise(oracle.noise, rng);
  }
  return data;
}

double excess_risk(const DesignOracle& oracle, const Eigen::VectorXd& theta) {
  if (theta.size() != oracle.d) {
    throw std::invalid_argument("excess_risk: coefficient length mismatch");
  }
  const Eigen::VectorXd diff = theta - oracle.theta_star;
  return diff.dot(oracle.gram * diff);
}

}  // namespace truncls
