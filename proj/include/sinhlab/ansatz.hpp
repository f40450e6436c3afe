#pragma once

#include "sinhlab/greens.hpp"
#include "sinhlab/hamiltonian.hpp"
#include "sinhlab/mesh.hpp"

#include <vector>

namespace sinhlab {

struct BubbleParams {
  double tau = 1.0;
  Vec2 center = Vec2::Zero();
  double rho = 1.0;
  int sign = 1;
};

/// tau_k = exp(4 pi [-R(xi_k) + sum_{i != k} alpha_k alpha_i G(xi_k, xi_i)]) / sqrt(8).
std::vector<double> tau_values(const SignedConfig& config);

/// Liouville bubble U = log(8 tau^2 / (tau^2 rho^2 + |x - xi|^2)^2), solving -Laplace U = rho^2 e^U in R^2.
double bubble_value(const BubbleParams& p, const Vec2& x);

/// PU = U - 8 pi H(x, xi) - log(8 tau^2); vanishes on the boundary up to O(rho^2).
double projected_bubble_value(const BubbleParams& p, const GreenKernel& kernel, const Vec2& x);
double projected_bubble_value(const BubbleParams& p, const Domain& domain, const Vec2& x);

/// u_0 = sum_k alpha_k PU_k sampled at the mesh nodes, with bubbles centred at `centers`.
GridField approximate_solution(const SignedConfig& config, const std::vector<double>& taus, double rho,
                               const MeshPtr& mesh, const std::vector<Vec2>& centers);
GridField approximate_solution(const SignedConfig& config, double rho, const MeshPtr& mesh);

/// 8 pi sum_k alpha_k G(x, xi_k).
double far_field_limit(const SignedConfig& config, const Vec2& x);

}  // namespace sinhlab
