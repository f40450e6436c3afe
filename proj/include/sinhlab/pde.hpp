#pragma once

#include "sinhlab/hamiltonian.hpp"
#include "sinhlab/laplacian.hpp"
#include "sinhlab/mesh.hpp"

#include <vector>

namespace sinhlab {

struct SolverOptions {
  int max_iterations = 50;
  /// Smallest accepted damping factor.
  double min_step = 0x1p-20;
  BoundaryScheme scheme = BoundaryScheme::CutCell;
};

struct SolverReport {
  bool converged = false;
  int iterations = 0;
  /// Discrete L-infinity norm of -Laplace_h u - rho^2 (e^u - e^-u).
  double final_residual = 0.0;
  /// Discrete H1 norm of u - u_0.
  double correction_h1 = 0.0;
  /// Argmax of alpha_k u near each peak, refined to sub-cell accuracy.
  std::vector<Vec2> peak_locations;
};

struct SolveResult {
  GridField u;
  SolverReport report;
};

/// Damped Newton for -Laplace_h u = rho^2 (e^u - e^-u); the H1 correction is measured from the seed.
SolveResult solve_sinh_poisson(const GridField& seed, double rho, double tol, const SolverOptions& opts = {});
SolveResult solve_sinh_poisson(const GridField& seed, const SparseMatrix& A, double rho, double tol,
                               const SolverOptions& opts = {});

struct ContinuationStep {
  double rho = 0.0;
  GridField u;
  SolverReport report;
};

/// Solves along a strictly descending rho schedule. The first step is seeded by the ansatz, later
/// steps by the previous solution with its bubbles swapped for the ones at the new rho (centred at
/// the measured peaks). Completed steps are appended to `out` before any failure is raised.
void continuation_solve(const SignedConfig& config, const std::vector<double>& schedule, const MeshPtr& mesh,
                        double tol, std::vector<ContinuationStep>& out, const SolverOptions& opts = {});
std::vector<ContinuationStep> continuation_solve(const SignedConfig& config, const std::vector<double>& schedule,
                                                 const MeshPtr& mesh, double tol, const SolverOptions& opts = {});

/// L-infinity residual evaluated node by node in flux form, independent of the assembled matrix.
double residual_norm(const GridField& u, double rho, BoundaryScheme scheme = BoundaryScheme::CutCell);

/// sqrt(h^2 sum d^2 + h^2 d^T A d) with A the zero-flux operator, so only edges between
/// interior nodes enter. The ansatz misses the boundary condition by O(rho^2), and a cut-cell
/// energy would amplify that mismatch by the inverse arm length.
double discrete_h1_norm(const GridField& d);
double discrete_h1_norm(const GridField& d, const SparseMatrix& A);

/// Peak of alpha_k u inside a ball around each xi_k, with parabolic sub-cell refinement.
std::vector<Vec2> locate_peaks(const GridField& u, const SignedConfig& config);

}  // namespace sinhlab
