#pragma once

#include "sinhlab/laplacian.hpp"
#include "sinhlab/mesh.hpp"

#include <Eigen/Core>

#include <vector>

namespace sinhlab {

/// w = rho^2 (e^u + e^-u) per node.
Eigen::VectorXd assemble_weight(const GridField& u, double rho);

struct EigenOptions {
  /// Shift of the spectral transform (A - sigma W)^-1 W; must lie below the wanted eigenvalues.
  double sigma = 0.0;
  /// Problems with fewer unknowns use a dense generalized solver.
  int dense_threshold = 3000;
  double tol = 1e-13;
  int max_iterations = 3000;
  /// Seed of the fixed pseudo-random Krylov start vector.
  unsigned seed = 20240607u;
};

struct SpectrumResult {
  double rho = 0.0;
  /// Ascending.
  Eigen::VectorXd eigenvalues;
  /// W-orthonormal eigenvectors, one per column, before normalization.
  Eigen::MatrixXd vectors;
  /// Eigenvectors scaled to unit sup norm with the largest-magnitude node positive.
  std::vector<GridField> eigenfields;
  int morse_index = 0;
  /// Indices of eigenvalues grouped by near-equality.
  std::vector<std::vector<int>> clusters;
};

/// K smallest eigenpairs of A v = mu W v, W = diag(weight).
SpectrumResult eigenpairs(const SparseMatrix& A, const Eigen::VectorXd& weight, int K, const MeshPtr& mesh,
                          const EigenOptions& opts = {});

GridField sup_normalize(const GridField& v);

/// Consecutive eigenvalues within rel_tol (relative) of each other share a cluster.
std::vector<std::vector<int>> eigenvalue_clusters(const Eigen::VectorXd& mu, double rel_tol = 1e-6);

struct MorseCount {
  /// #{j : mu_j < 1} with multiplicity.
  int index = 0;
  /// Half-width of the guard band around 1.
  double band = 0.0;
  /// Eigenvalue indices inside (1 - band, 1 + band).
  std::vector<int> ambiguous;
  bool certified() const { return ambiguous.empty(); }
};

/// Counts eigenvalues below 1 with guard band max(5 rho^2, 10 solver_tol).
MorseCount morse_index(const SpectrumResult& result, double solver_tol = 1e-8);

struct RescaleOptions {
  /// Radius of the sample disc in bubble coordinates.
  double radius = 40.0;
  /// Sample spacing in bubble coordinates.
  double spacing = 0.25;
};

/// Eigenfunction seen from peak k: samples v((tau_k rho / sqrt 8) y + xi_k) on a Cartesian grid |y| <= radius.
struct RescaledProfile {
  int peak = 0;
  double scale = 0.0;
  std::vector<Vec2> points;
  Eigen::VectorXd values;
};

RescaledProfile rescale_eigenfunction(const GridField& v, const std::vector<Vec2>& peaks,
                                      const std::vector<double>& taus, double rho, int k,
                                      const RescaleOptions& opts = {});

/// Largest rescaled radius for which the sample disc around `peak` stays inside the domain.
double admissible_rescale_radius(const Domain& domain, const Vec2& peak, double tau, double rho);

}  // namespace sinhlab
