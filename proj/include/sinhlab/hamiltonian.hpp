#pragma once

#include "sinhlab/domain.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace sinhlab {

/// Peak locations xi_1..xi_m with signs alpha_k in {-1, +1}.
struct SignedConfig {
  Domain domain = Domain::unit_disc();
  std::vector<Vec2> points;
  std::vector<int> signs;
  /// Pairwise distances must be at least twice this.
  double separation_floor = 1e-3;

  int size() const { return static_cast<int>(points.size()); }
  /// Throws InvalidArgument, OutOfDomain or PointsTooClose.
  void validate() const;
  /// Smallest pairwise distance, or +inf for a single point.
  double min_separation() const;
  /// Packs the points as (x_1..x_m, y_1..y_m).
  Eigen::VectorXd coordinates() const;
  SignedConfig with_coordinates(const Eigen::VectorXd& z) const;
};

/// Kirchhoff-Routh Hamiltonian
///   F = -1/2 sum_k R(xi_k) + 1/2 sum_{k != j} alpha_k alpha_j G(xi_k, xi_j),
/// where R is the Robin function of the regular part H in G = -(1/2pi)log|x-y| - H.
double hamiltonian_value(const SignedConfig& config);

struct HamiltonianDerivatives {
  /// Ordered as the x-components of all points, then the y-components.
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

HamiltonianDerivatives hamiltonian_derivatives(const SignedConfig& config);

enum class Classification { Min, Max, Saddle, Degenerate };
std::string to_string(Classification c);

struct CriticalPointResult {
  SignedConfig config;
  double grad_norm = 0.0;
  Eigen::MatrixXd hess;
  Eigen::VectorXd hess_eigenvalues;
  Classification classification = Classification::Degenerate;
  /// Eigenvalues below minus the degeneracy band.
  int negative_count = 0;
  int iterations = 0;
};

/// Relative band |lambda| <= band * max|lambda| inside which a Hessian eigenvalue counts as zero.
inline constexpr double kDegeneracyBand = 1e-8;

CriticalPointResult classify_critical_point(const SignedConfig& config);

/// Damped Newton iteration on grad F = 0. The step uses the pseudo-inverse of Hess F so that
/// symmetry-induced zero modes do not stall the iteration; Armijo backtracking on |grad F|^2.
CriticalPointResult find_critical_point(const SignedConfig& seed, double tol, int max_iterations = 200);

struct ScaledHessian {
  /// Diagonal of D = diag(tau_1..tau_m, tau_1..tau_m).
  Eigen::VectorXd D;
  Eigen::MatrixXd matrix;
  /// Ascending eigenvalues of D (Hess F) D.
  Eigen::VectorXd etas;
  /// 1 - 3 pi rho^2 eta_j, one entry per eta.
  Eigen::VectorXd mu_pred;
};

ScaledHessian scaled_hessian_spectrum(const SignedConfig& config, double rho);

}  // namespace sinhlab
