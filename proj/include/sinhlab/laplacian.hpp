#pragma once

#include "sinhlab/mesh.hpp"

#include <Eigen/SparseCore>

namespace sinhlab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Boundary closure of the 5-point stencil.
enum class BoundaryScheme {
  /// Symmetric cut-cell closure: the flux through a cut face is u_i / (theta h).
  CutCell,
  /// Shortley-Weller unequal-arm differences (not symmetric).
  ShortleyWeller,
  /// Zero-flux staircase: links that leave the domain are dropped.
  Natural,
};

/// Discrete -Laplace with homogeneous Dirichlet data eliminated (or natural closure).
SparseMatrix assemble_laplacian(const Mesh& mesh, BoundaryScheme scheme = BoundaryScheme::CutCell);

/// Applies the same operator without assembling it, node by node.
Eigen::VectorXd apply_laplacian(const Mesh& mesh, const Eigen::VectorXd& u,
                                BoundaryScheme scheme = BoundaryScheme::CutCell);

}  // namespace sinhlab
