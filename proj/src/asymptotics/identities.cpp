#include "sinhlab/asymptotics.hpp"

#include "sinhlab/errors.hpp"
#include "sinhlab/greens.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace sinhlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCirclePoints = 512;
constexpr int kRadialPoints = 64;

/// Gauss-Legendre nodes and weights on [-1, 1] from the Jacobi matrix.
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x = es.eigenvalues();
  w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
}

Vec2 unit(double theta) { return Vec2(std::cos(theta), std::sin(theta)); }

PohozaevResult pohozaev_quadrature(const FieldFunction& f, const FieldFunction& g, const Vec2& xi, double R) {
  if (!(R > 0.0)) throw Error(Errc::QuadratureFailure, "ball radius must be positive");
  static thread_local Eigen::VectorXd gx, gw;
  if (gx.size() != kRadialPoints) gauss_legendre(kRadialPoints, gx, gw);
  const double dth = 2.0 * kPi / kCirclePoints;
  PohozaevResult out;
  for (int a = 0; a < kCirclePoints; ++a) {
    const Vec2 nu = unit(a * dth);
    for (int b = 0; b < kRadialPoints; ++b) {
      const double r = 0.5 * R * (gx[b] + 1.0);
      const Vec2 d = r * nu;
      const FieldJet fj = f(xi + d), gj = g(xi + d);
      out.lhs += gw[b] * 0.5 * R * r * dth * (d.dot(fj.grad) * gj.laplacian + d.dot(gj.grad) * fj.laplacian);
    }
    const FieldJet fj = f(xi + R * nu), gj = g(xi + R * nu);
    out.rhs += R * R * dth * (2.0 * nu.dot(fj.grad) * nu.dot(gj.grad) - fj.grad.dot(gj.grad));
  }
  if (!std::isfinite(out.lhs) || !std::isfinite(out.rhs))
    throw Error(Errc::QuadratureFailure, "non-finite integrand in the Pohozaev quadrature");
  out.gap = std::abs(out.lhs - out.rhs) / std::max(1.0, std::abs(out.lhs));
  return out;
}

/// Nodal centred differences, one-sided across a missing neighbour.
Eigen::VectorXd nodal_derivative(const Mesh& m, const Eigen::VectorXd& u, int axis) {
  const int dp = 2 * axis, dm = dp + 1;
  Eigen::VectorXd d(m.size());
  for (int k = 0; k < m.size(); ++k) {
    const int p = m.neighbour(k, dp), q = m.neighbour(k, dm);
    const double up = p >= 0 ? u[p] : 0.0, uq = q >= 0 ? u[q] : 0.0;
    const double hp = (p >= 0 ? 1.0 : m.arm(k, dp)) * m.h(), hq = (q >= 0 ? 1.0 : m.arm(k, dm)) * m.h();
    // Three-point derivative on unequal arms.
    d[k] = (hq * hq * (up - u[k]) + hp * hp * (u[k] - uq)) / (hp * hq * (hp + hq));
  }
  return d;
}

}  // namespace

PohozaevResult pohozaev_check(const FieldFunction& f, const FieldFunction& g, const Vec2& xi, double R) {
  if (!f || !g) throw Error(Errc::InvalidArgument, "both fields must be supplied");
  return pohozaev_quadrature(f, g, xi, R);
}

PohozaevResult pohozaev_check(const GridField& f, const GridField& g, const Vec2& xi, double R) {
  if (!f.mesh || f.mesh != g.mesh) throw Error(Errc::InvalidArgument, "fields must share one mesh");
  const Mesh& m = *f.mesh;
  if (!(m.domain().boundary_distance(xi) > R + 2.0 * m.h()))
    throw Error(Errc::QuadratureFailure, "ball is not inside the mesh interior");
  auto jet = [&m](const GridField& u) {
    const Eigen::VectorXd dx = nodal_derivative(m, u.values, 0), dy = nodal_derivative(m, u.values, 1);
    const Eigen::VectorXd lap = -apply_laplacian(m, u.values, BoundaryScheme::ShortleyWeller);
    return FieldFunction([&m, dx, dy, lap, v = u.values](const Vec2& x) {
      FieldJet j;
      j.value = m.interpolate(v, x);
      j.grad = Vec2(m.interpolate(dx, x), m.interpolate(dy, x));
      j.laplacian = m.interpolate(lap, x);
      return j;
    });
  };
  return pohozaev_quadrature(jet(f), jet(g), xi, R);
}

double green_boundary_integral_check(const SignedConfig& config, int k, int i, int j, double R, BoundaryFlux flux) {
  config.validate();
  const int m = config.size();
  if (k < 0 || i < 0 || j < 0 || k >= m || i >= m || j >= m) throw Error(Errc::InvalidArgument, "peak index out of range");
  const Vec2& c = config.points[k];
  if (!(R > 0.0) || !(config.domain.boundary_distance(c) > R))
    throw Error(Errc::BallNotAdmissible, "ball leaves the domain");
  for (int l = 0; l < m; ++l)
    if (l != k && !((config.points[l] - c).norm() > R)) throw Error(Errc::BallNotAdmissible, "ball contains another peak");
  const GreenKernel kernel(config.domain);
  const double dth = 2.0 * kPi / kCirclePoints;
  double sum = 0.0;
  for (int a = 0; a < kCirclePoints; ++a) {
    const Vec2 nu = unit(a * dth), x = c + R * nu;
    const Vec2 gi = kernel.green_derivatives(x, config.points[i]).grad_x;
    const Vec2 gj = kernel.green_derivatives(x, config.points[j]).grad_x;
    sum += flux == BoundaryFlux::Gradient ? gi.dot(gj) : nu.dot(gi) * nu.dot(gj);
  }
  const double integral = sum * R * dth;
  return (k == i || k == j) ? R * integral : integral;
}

double hessian_boundary_integral_check(const Domain& domain, const Vec2& z1, const Vec2& z2, const Vec2& z3,
                                       double R, int i, int j) {
  if (i < 0 || i > 1 || j < 0 || j > 1) throw Error(Errc::InvalidArgument, "derivative index must be 0 or 1");
  if (!(R > 0.0) || !(domain.boundary_distance(z1) > R)) throw Error(Errc::BallNotAdmissible, "ball leaves the domain");
  for (const Vec2* z : {&z2, &z3}) {
    const double d = (*z - z1).norm();
    if (d != 0.0 && !(d > R)) throw Error(Errc::BallNotAdmissible, "pole lies inside the ball without being its centre");
    if (!domain.strictly_inside(*z)) throw Error(Errc::OutOfDomain, "pole outside the domain");
  }
  const GreenKernel kernel(domain);
  const double dth = 2.0 * kPi / kCirclePoints;
  double sum = 0.0;
  for (int a = 0; a < kCirclePoints; ++a) {
    const Vec2 nu = unit(a * dth), x = z1 + R * nu;
    const KernelEval p = kernel.green_derivatives(x, z2), q = kernel.green_derivatives(x, z3);
    const double dnu_dxi = (p.hess_xx * nu)[i];
    const double dnu_dyj = nu.dot(q.hess_xy.col(j));
    sum += dnu_dxi * q.grad_y[j] - p.grad_x[i] * dnu_dyj;
  }
  return sum * R * dth;
}

double hessian_boundary_integral_limit(const Domain& domain, const Vec2& z1, const Vec2& z2, const Vec2& z3, int i,
                                       int j) {
  if (i < 0 || i > 1 || j < 0 || j > 1) throw Error(Errc::InvalidArgument, "derivative index must be 0 or 1");
  const bool c2 = z2 == z1, c3 = z3 == z1;
  const GreenKernel kernel(domain);
  if (c2 && c3) return -0.5 * kernel.robin(z1).hess(i, j);
  if (c2) return kernel.green_derivatives(z1, z3).hess_xy(i, j);
  if (c3) return kernel.green_derivatives(z1, z2).hess_xx(i, j);
  return 0.0;
}

}  // namespace sinhlab
