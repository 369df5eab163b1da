#include "truncls/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "truncls/rng.hpp"

namespace truncls {

namespace {

constexpr double kEigenClampRel = 1e-12;

void clamp_spectrum(Eigen::VectorXd& eigenvalues) {
  const double top = eigenvalues.size() > 0 ? eigenvalues.maxCoeff() : 0.0;
  const double floor = top > 0.0 ? kEigenClampRel * top : 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] < floor) eigenvalues[i] = 0.0;
  }
}

// sqrt(mean t^4) / mean t^2 along direction u; NaN when the direction
// carries no variance.
double direction_ratio(const Eigen::MatrixXd& xs, const Eigen::VectorXd& u) {
  const Eigen::ArrayXd t = (xs * u).array();
  const double m2 = t.square().mean();
  if (m2 <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double m4 = t.square().square().mean();
  return std::sqrt(m4) / m2;
}

}  // namespace

GramSpectrum spectrum_of(const Eigen::MatrixXd& q, double lambda) {
  if (q.rows() != q.cols() || q.rows() < 1) {
    throw std::invalid_argument("gram spectrum: matrix must be square");
  }
  const double scale = q.cwiseAbs().maxCoeff();
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0)) {
    throw std::invalid_argument("gram spectrum: matrix is not symmetric");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("gram spectrum: lambda must be non-negative");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gram spectrum: eigendecomposition failed");
  }
  GramSpectrum spectrum;
  spectrum.q = q;
  spectrum.lambda = lambda;
  // Solver returns ascending order; store descending.
  spectrum.eigenvalues = solver.eigenvalues().reverse();
  spectrum.eigenvectors = solver.eigenvectors().rowwise().reverse();
  clamp_spectrum(spectrum.eigenvalues);
  return spectrum;
}

GramSpectrum gram_matrix(const Dataset& data, double lambda) {
  data.validate();
  const Eigen::MatrixXd q =
      data.xs.transpose() * data.xs / static_cast<double>(data.n());
  return spectrum_of(q, lambda);
}

double effective_dimension(const GramSpectrum& spectrum) {
  double dim = 0.0;
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const double nu = spectrum.eigenvalues[i];
    if (nu > 0.0) dim += nu / (nu + spectrum.lambda);
  }
  return dim;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& q, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("pseudo_inverse: eigendecomposition failed");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double top = values.cwiseAbs().maxCoeff();
  const double cutoff = rel_tol * top;
  Eigen::VectorXd inverted = Eigen::VectorXd::Zero(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] > cutoff) inverted[i] = 1.0 / values[i];
  }
  return solver.eigenvectors() * inverted.asDiagonal() *
         solver.eigenvectors().transpose();
}

CoefficientSet empirical_coefficients(const Dataset& data,
                                      const Eigen::VectorXd& theta_ref,
                                      double lambda, double theta_radius,
                                      std::uint64_t direction_seed) {
  data.validate();
  if (theta_ref.size() != data.d()) {
    throw std::invalid_argument("empirical_coefficients: theta_ref length mismatch");
  }
  if (!std::isfinite(theta_radius) || theta_radius <= 0.0) {
    throw std::invalid_argument("empirical_coefficients: theta_radius must be positive");
  }

  CoefficientSet coeffs;
  const Eigen::Index d = data.d();
  const Eigen::ArrayXd resid = (data.xs * theta_ref - data.ys).array();
  const double r2 = resid.square().mean();
  const double r4 = resid.square().square().mean();
  coeffs.sigma = std::sqrt(r2);
  if (r2 > 0.0) {
    coeffs.kappa_prime = std::sqrt(r4) / r2;
  } else {
    coeffs.kappa_prime = 1.0;
    coeffs.degenerate_residuals = true;
  }

  const GramSpectrum spectrum = gram_matrix(data, lambda);
  coeffs.d_eff = effective_dimension(spectrum);
  coeffs.t_diameter =
      2.0 * theta_radius * std::sqrt(lambda + spectrum.eigenvalues[0]);

  Eigen::MatrixXd q_lam = spectrum.q;
  q_lam.diagonal().array() += lambda;
  const Eigen::MatrixXd q_lam_inv = pseudo_inverse(q_lam);
  Eigen::ArrayXd leverage(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    leverage[i] = data.xs.row(i) * q_lam_inv * data.xs.row(i).transpose();
  }
  const double lev_mean = leverage.mean();
  coeffs.kappa =
      lev_mean > 0.0 ? std::sqrt(leverage.square().mean()) / lev_mean : 1.0;

  // chi probes: Gram eigenvectors, coordinate axes, 256 seeded random
  // directions. The scale of a direction cancels in the ratio.
  double chi = 1.0;
  bool found = false;
  auto consider = [&](const Eigen::VectorXd& u) {
    const double ratio = direction_ratio(data.xs, u);
    if (std::isnan(ratio)) return;
    chi = found ? std::max(chi, ratio) : ratio;
    found = true;
  };
  for (Eigen::Index j = 0; j < d; ++j) consider(spectrum.eigenvectors.col(j));
  for (Eigen::Index j = 0; j < d; ++j) consider(Eigen::VectorXd::Unit(d, j));
  Rng rng(direction_seed);
  for (int rep = 0; rep < 256; ++rep) {
    Eigen::VectorXd u(d);
    for (Eigen::Index j = 0; j < d; ++j) u[j] = rng.normal();
    const double norm = u.norm();
    if (norm > 0.0) consider(u / norm);
  }
  coeffs.chi = chi;
  return coeffs;
}

double theoretical_alpha(const CoefficientSet& coeffs, Eigen::Index n,
                         double c) {
  if (!std::isfinite(c) || c <= 0.0) {
    throw std::invalid_argument("theoretical_alpha: c must be positive");
  }
  if (n < 1) {
    throw std::invalid_argument("theoretical_alpha: n must be positive");
  }
  const double margin =
      1.0 - c * coeffs.kappa * coeffs.chi * coeffs.d_eff / static_cast<double>(n);
  if (margin <= 0.0) {
    throw std::domain_error("theoretical_alpha: n too small (requires n > c*kappa*chi*D)");
  }
  const double width = 2.0 * std::sqrt(coeffs.kappa_prime) * coeffs.sigma +
                       std::sqrt(coeffs.chi) * coeffs.t_diameter;
  if (width <= 0.0) {
    throw std::domain_error("theoretical_alpha: degenerate scale (sigma and T both zero)");
  }
  return margin / (2.0 * coeffs.chi * width * width);
}

DesignBounds gaussian_design_coeffs(const Eigen::VectorXd& eigenvalues,
                                    double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("gaussian_design_coeffs: lambda must be non-negative");
  }
  Eigen::VectorXd nu = eigenvalues;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (!std::isfinite(nu[i]) || nu[i] < 0.0) {
      throw std::invalid_argument("gaussian_design_coeffs: eigenvalues must be non-negative");
    }
  }
  clamp_spectrum(nu);
  double dim = 0.0;
  double dim2 = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (nu[i] > 0.0) {
      const double share = nu[i] / (nu[i] + lambda);
      dim += share;
      dim2 += share * share;
    }
  }
  if (dim == 0.0) {
    throw std::domain_error("gaussian_design_coeffs: spectrum has no positive eigenvalue");
  }
  return {std::sqrt(3.0), std::sqrt(1.0 + 2.0 * dim2 / (dim * dim))};
}

double independent_design_chi_bound(double chi_star, Eigen::Index d,
                                    bool skew_free) {
  if (!std::isfinite(chi_star) || chi_star < 1.0) {
    throw std::domain_error("independent_design_chi_bound: chi_star must be >= 1");
  }
  if (d < 1) {
    throw std::invalid_argument("independent_design_chi_bound: d must be positive");
  }
  const double sqrt3 = std::sqrt(3.0);
  const double dd = static_cast<double>(d);
  if (skew_free) {
    if (chi_star >= sqrt3) return chi_star;
    return std::sqrt(3.0 + (chi_star * chi_star - 3.0) / dd);
  }
  const double skew_term = std::pow(3.0, 1.5) / 4.0;
  if (chi_star >= sqrt3) {
    return chi_star * std::sqrt(1.0 + skew_term / std::sqrt(chi_star));
  }
  return std::sqrt(3.0 + skew_term * std::pow(chi_star, 1.5) +
                   (chi_star * chi_star - 3.0) / dd);
}

DesignBounds bounded_design_bounds(double a, double b, double lambda,
                                   double d_eff) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("bounded_design_bounds: a and b must be positive");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("bounded_design_bounds: lambda must be non-negative");
  }
  if (!(d_eff > 0.0)) {
    throw std::domain_error("bounded_design_bounds: effective dimension must be positive");
  }
  const double chi = a * b;
  return {chi, chi / std::sqrt((1.0 + lambda * a * a) * d_eff)};
}

DesignBounds density_ratio_rescale(double chi_tilde, double kappa_tilde,
                                   double eta) {
  if (!std::isfinite(eta) || eta < 1.0) {
    throw std::domain_error("density_ratio_rescale: eta must be >= 1");
  }
  return {std::pow(eta, 1.5) * chi_tilde, std::pow(eta, 3.5) * kappa_tilde};
}

}  // namespace truncls
