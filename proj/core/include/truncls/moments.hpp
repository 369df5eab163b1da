#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "truncls/dataset.hpp"

namespace truncls {

/// Empirical second-moment matrix with its eigendecomposition and the ridge
/// weight it is paired with.
struct GramSpectrum {
  Eigen::MatrixXd q;             ///< d x d symmetric positive semidefinite
  Eigen::VectorXd eigenvalues;   ///< descending; entries below 1e-12 * max clamped to 0
  Eigen::MatrixXd eigenvectors;  ///< columns aligned with `eigenvalues`
  double lambda = 0.0;
};

/// Eigendecomposition of an already-formed Gram matrix.
GramSpectrum spectrum_of(const Eigen::MatrixXd& q, double lambda = 0.0);

/// Q = (1/n) sum_i x_i x_i' for the sample, with its spectrum.
GramSpectrum gram_matrix(const Dataset& data, double lambda = 0.0);

/// Effective ridge dimension: sum over positive eigenvalues of nu/(nu+lambda).
/// Equals the rank of Q at lambda = 0 and shrinks as lambda grows.
double effective_dimension(const GramSpectrum& spectrum);

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix; eigenvalues below
/// rel_tol times the largest are treated as zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& q,
                               double rel_tol = 1e-10);

/// Fourth-moment diagnostics of a design/noise pair.
struct CoefficientSet {
  double sigma = 0.0;        ///< RMS residual of the reference coefficients
  double chi = 1.0;          ///< max of sqrt(E f^4)/E f^2 over probe directions
  double kappa = 1.0;        ///< sqrt(E m^2)/E m with m = x' (Q+lambda I)^+ x
  double kappa_prime = 1.0;  ///< sqrt(E r^4)/E r^2 over residuals
  double t_diameter = 0.0;   ///< diameter of the coefficient ball in the risk metric
  double d_eff = 0.0;        ///< effective ridge dimension of the sample Gram
  bool degenerate_residuals = false;  ///< zero residuals; kappa_prime reported as 1
};

/// Plug-in estimates of the diagnostics for a coefficient ball of the given
/// radius. The chi probe set is the Gram eigenvectors, the coordinate axes
/// and 256 random unit directions drawn from `direction_seed`; the reported
/// chi is a lower estimate of the sphere maximum.
CoefficientSet empirical_coefficients(const Dataset& data,
                                      const Eigen::VectorXd& theta_ref,
                                      double lambda, double theta_radius,
                                      std::uint64_t direction_seed = 12345);

/// Truncation scale suggested by the deviation analysis:
///   (1 / (2*chi*(2*sqrt(kappa')*sigma + sqrt(chi)*T)^2)) * (1 - c*kappa*chi*D/n).
/// Throws std::domain_error when n <= c*kappa*chi*D (sample too small) or
/// when sigma and T are both zero.
double theoretical_alpha(const CoefficientSet& coeffs, Eigen::Index n,
                         double c = 1.0);

struct DesignBounds {
  double chi = 0.0;
  double kappa = 0.0;
};

/// Closed forms for a centered Gaussian design with the given Gram spectrum:
/// chi = sqrt(3) and kappa = sqrt(1 + 2*D2/D^2) <= sqrt(3), with
/// D = sum nu/(nu+lambda) and D2 = sum nu^2/(nu+lambda)^2 over positive nu.
DesignBounds gaussian_design_coeffs(const Eigen::VectorXd& eigenvalues,
                                    double lambda);

/// chi bound for a design with independent coordinates, from the largest
/// per-coordinate fourth-moment ratio chi_star (>= 1). `skew_free` selects
/// the tighter bound valid when all third moments vanish.
double independent_design_chi_bound(double chi_star, Eigen::Index d,
                                    bool skew_free);

/// chi and kappa bounds for an almost surely bounded design:
/// |x| <= b and |u| <= a * sqrt(E <u,x>^2) give chi <= a*b and
/// kappa <= a*b / sqrt((1 + lambda*a^2) * D).
DesignBounds bounded_design_bounds(double a, double b, double lambda,
                                   double d_eff);

/// Transports (chi, kappa) bounds through a density ratio in (1/eta, eta):
/// chi <= eta^(3/2) * chi_tilde and kappa <= eta^(7/2) * kappa_tilde.
DesignBounds density_ratio_rescale(double chi_tilde, double kappa_tilde,
                                   double eta);

}  // namespace truncls
