#pragma once

#include "sinhlab/domain.hpp"

namespace sinhlab {

/// Value and derivatives of a two-point kernel K(x, y).
struct KernelEval {
  double value = 0.0;
  Vec2 grad_x = Vec2::Zero();
  Vec2 grad_y = Vec2::Zero();
  Mat2 hess_xx = Mat2::Zero();
  /// (hess_xy)(i,j) = d^2 K / dx_i dy_j.
  Mat2 hess_xy = Mat2::Zero();
  Mat2 hess_yy = Mat2::Zero();
};

/// R(x) = H(x, x) with its gradient and Hessian.
struct RobinEval {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};

/// Dirichlet Green function of -Laplace on a model domain, with
///   G(x,y) = -(1/2pi) log|x-y| - H(x,y),  -Laplace_x G = delta_y,  G = 0 on the boundary.
/// Discs use the image formula, rectangles a strip kernel summed over reflected images.
/// Instances are immutable and safe to share between threads.
class GreenKernel {
 public:
  explicit GreenKernel(Domain domain, int max_terms = 64);

  const Domain& domain() const { return domain_; }

  double green(const Vec2& x, const Vec2& y) const;
  double regular(const Vec2& x, const Vec2& y) const;
  KernelEval green_derivatives(const Vec2& x, const Vec2& y) const;
  KernelEval regular_derivatives(const Vec2& x, const Vec2& y) const;
  RobinEval robin(const Vec2& x) const;

  /// Number of image periods summed on each side for the rectangle series.
  int image_terms() const { return terms_; }

  /// Points closer than this to the boundary are rejected.
  static constexpr double boundary_margin = 1e-9;

 private:
  void require_interior(const Vec2& x) const;
  void require_distinct(const Vec2& x, const Vec2& y) const;

  KernelEval disc_regular(const Vec2& x, const Vec2& y) const;
  /// Image sum of the rectangle kernel; the direct image is skipped when include_direct is false.
  KernelEval rect_images(const Vec2& x, const Vec2& y, bool include_direct) const;
  /// Smooth remainder of the direct image, (1/4pi)(psi - log|x-y|^2).
  double rect_direct_regular(const Vec2& d) const;

  Domain domain_;
  int terms_ = 0;
  double kappa_ = 0.0;
  double period_ = 0.0;
  int axis_a_ = 0;
  int axis_b_ = 1;
};

KernelEval free_space_kernel(const Vec2& x, const Vec2& y);

double green_value(const Domain& domain, const Vec2& x, const Vec2& y);
double green_regular_part(const Domain& domain, const Vec2& x, const Vec2& y);
RobinEval robin_eval(const Domain& domain, const Vec2& x);
KernelEval green_derivatives(const Domain& domain, const Vec2& x, const Vec2& y);

/// Discrete Green value: solves the mesh Laplacian with a unit source spread bilinearly
/// around y and interpolates the result at x.
double discrete_green_crosscheck(const Domain& domain, double h, const Vec2& x, const Vec2& y);

}  // namespace sinhlab
