#include "sinhlab/greens.hpp"

#include "sinhlab/errors.hpp"

#include <cmath>
#include <numbers>

namespace sinhlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesTol = 1e-13;

/// psi(A,B) = log(cosh kA - cos kB) with the k|A| - log 2 part removed (it cancels
/// between images of opposite b-reflection), plus first and second derivatives.
struct Psi {
  double value, a, b, aa, ab;
};

Psi strip_psi(double kappa, double A, double B) {
  const double t = std::exp(-kappa * std::abs(A));
  const double sgn = A > 0 ? 1.0 : (A < 0 ? -1.0 : 0.0);
  const double s = std::sin(0.5 * kappa * B);
  const double one_m_t = -std::expm1(-kappa * std::abs(A));
  const double E = one_m_t * one_m_t + 4.0 * t * s * s;
  const double sinb = std::sin(kappa * B);
  const double cosb = std::cos(kappa * B);
  const double one_m_t2 = one_m_t * (1.0 + t);
  Psi p{};
  p.value = std::log(E);
  p.a = kappa * sgn * one_m_t2 / E;
  p.b = kappa * sinb * 2.0 * t / E;
  p.aa = kappa * kappa * (4.0 * t * t - 2.0 * t * (1.0 + t * t) * cosb) / (E * E);
  p.ab = -kappa * kappa * sgn * one_m_t2 * sinb * 2.0 * t / (E * E);
  return p;
}

/// (1 - exp(-z)) / z, continuous at 0.
double e1(double z) { return z < 1e-12 ? 1.0 - 0.5 * z : -std::expm1(-z) / z; }

double sinc(double z) { return std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z; }

/// Derivatives of log q for q = 1 - 2 x.y + |x|^2 |y|^2.
KernelEval log_q(const Vec2& x, const Vec2& y) {
  const double xx = x.squaredNorm();
  const double yy = y.squaredNorm();
  const double q = 1.0 - 2.0 * x.dot(y) + xx * yy;
  const Vec2 qx = 2.0 * (yy * x - y);
  const Vec2 qy = 2.0 * (xx * y - x);
  const Mat2 I = Mat2::Identity();
  const Mat2 qxy = -2.0 * I + 4.0 * x * y.transpose();
  KernelEval k;
  k.value = std::log(q);
  k.grad_x = qx / q;
  k.grad_y = qy / q;
  k.hess_xx = 2.0 * yy * I / q - qx * qx.transpose() / (q * q);
  k.hess_yy = 2.0 * xx * I / q - qy * qy.transpose() / (q * q);
  k.hess_xy = qxy / q - qx * qy.transpose() / (q * q);
  return k;
}

KernelEval scale(KernelEval k, double c) {
  k.value *= c;
  k.grad_x *= c;
  k.grad_y *= c;
  k.hess_xx *= c;
  k.hess_xy *= c;
  k.hess_yy *= c;
  return k;
}

KernelEval subtract(const KernelEval& p, const KernelEval& q) {
  KernelEval k;
  k.value = p.value - q.value;
  k.grad_x = p.grad_x - q.grad_x;
  k.grad_y = p.grad_y - q.grad_y;
  k.hess_xx = p.hess_xx - q.hess_xx;
  k.hess_xy = p.hess_xy - q.hess_xy;
  k.hess_yy = p.hess_yy - q.hess_yy;
  return k;
}

}  // namespace

KernelEval free_space_kernel(const Vec2& x, const Vec2& y) {
  const Vec2 d = x - y;
  const double r2 = d.squaredNorm();
  KernelEval k;
  k.value = -std::log(r2) / (4.0 * kPi);
  k.grad_x = -d / (2.0 * kPi * r2);
  k.grad_y = -k.grad_x;
  k.hess_xx = -(Mat2::Identity() / r2 - 2.0 * d * d.transpose() / (r2 * r2)) / (2.0 * kPi);
  k.hess_yy = k.hess_xx;
  k.hess_xy = -k.hess_xx;
  return k;
}

GreenKernel::GreenKernel(Domain domain, int max_terms) : domain_(std::move(domain)) {
  if (domain_.is_disc()) return;
  const auto& r = domain_.rectangle_shape();
  // Strip across the shorter side, images along the longer one.
  double S = r.height, L = r.width;
  axis_a_ = 0;
  axis_b_ = 1;
  if (r.width < r.height) {
    S = r.width;
    L = r.height;
    axis_a_ = 1;
    axis_b_ = 0;
  }
  kappa_ = kPi / S;
  period_ = 2.0 * L;
  const double bound = std::log(8.0 * std::max(1.0, kappa_ * kappa_) / kSeriesTol) / (kappa_ * period_);
  terms_ = 1 + static_cast<int>(std::ceil(bound));
  if (terms_ > max_terms)
    throw Error(Errc::SeriesNotConverged, "image series needs " + std::to_string(terms_) +
                                              " periods, limit " + std::to_string(max_terms));
}

void GreenKernel::require_interior(const Vec2& x) const {
  if (!x.allFinite() || domain_.boundary_distance(x) <= boundary_margin * domain_.length_scale())
    throw Error(Errc::OutOfDomain, "point is not strictly inside the domain");
}

void GreenKernel::require_distinct(const Vec2& x, const Vec2& y) const {
  if ((x - y).norm() <= 1e-14 * domain_.length_scale())
    throw Error(Errc::Singularity, "kernel evaluated on the diagonal");
}

KernelEval GreenKernel::disc_regular(const Vec2& x, const Vec2& y) const {
  const auto& d = domain_.disc_shape();
  const double a = d.radius;
  KernelEval k = scale(log_q((x - d.center) / a, (y - d.center) / a), -1.0 / (4.0 * kPi));
  k.grad_x /= a;
  k.grad_y /= a;
  k.hess_xx /= a * a;
  k.hess_xy /= a * a;
  k.hess_yy /= a * a;
  k.value -= std::log(a) / (2.0 * kPi);
  return k;
}

KernelEval GreenKernel::rect_images(const Vec2& x, const Vec2& y, bool include_direct) const {
  const int ia = axis_a_, ib = axis_b_;
  const double c = -1.0 / (4.0 * kPi);
  double v = 0, ga = 0, gb = 0, gya = 0, gyb = 0;
  double xaa = 0, xab = 0, xbb = 0;
  double yaa = 0, yab = 0, ybb = 0;
  double xy_aa = 0, xy_ab = 0, xy_ba = 0, xy_bb = 0;
  for (int m = -terms_; m <= terms_; ++m) {
    for (int sa = 1; sa >= -1; sa -= 2) {
      for (int sb = 1; sb >= -1; sb -= 2) {
        if (!include_direct && m == 0 && sa == 1 && sb == 1) continue;
        const double A = x[ia] - sa * y[ia] - m * period_;
        const double B = x[ib] - sb * y[ib];
        const Psi p = strip_psi(kappa_, A, B);
        const double w = c * sa * sb;
        v += w * p.value;
        ga += w * p.a;
        gb += w * p.b;
        gya += -w * sa * p.a;
        gyb += -w * sb * p.b;
        xaa += w * p.aa;
        xab += w * p.ab;
        xbb += -w * p.aa;
        yaa += w * p.aa;
        yab += w * sa * sb * p.ab;
        ybb += -w * p.aa;
        xy_aa += -w * sa * p.aa;
        xy_ab += -w * sb * p.ab;
        xy_ba += -w * sa * p.ab;
        xy_bb += w * sb * p.aa;
      }
    }
  }
  KernelEval k;
  k.value = v;
  k.grad_x[ia] = ga;
  k.grad_x[ib] = gb;
  k.grad_y[ia] = gya;
  k.grad_y[ib] = gyb;
  k.hess_xx(ia, ia) = xaa;
  k.hess_xx(ia, ib) = k.hess_xx(ib, ia) = xab;
  k.hess_xx(ib, ib) = xbb;
  k.hess_yy(ia, ia) = yaa;
  k.hess_yy(ia, ib) = k.hess_yy(ib, ia) = yab;
  k.hess_yy(ib, ib) = ybb;
  k.hess_xy(ia, ia) = xy_aa;
  k.hess_xy(ia, ib) = xy_ab;
  k.hess_xy(ib, ia) = xy_ba;
  k.hess_xy(ib, ib) = xy_bb;
  return k;
}

double GreenKernel::rect_direct_regular(const Vec2& d) const {
  const double A = d[axis_a_], B = d[axis_b_];
  const double r2 = A * A + B * B;
  const double z = kappa_ * std::abs(A);
  const double t = std::exp(-z);
  const double sb = sinc(0.5 * kappa_ * B);
  const double e = e1(z);
  if (r2 == 0.0) return std::log(kappa_ * kappa_) / (4.0 * kPi);
  const double r = kappa_ * kappa_ * (e * e * A * A + t * sb * sb * B * B) / r2;
  return std::log(r) / (4.0 * kPi);
}

double GreenKernel::green(const Vec2& x, const Vec2& y) const {
  require_interior(x);
  require_interior(y);
  require_distinct(x, y);
  if (domain_.is_disc()) return free_space_kernel(x, y).value - disc_regular(x, y).value;
  return rect_images(x, y, true).value;
}

double GreenKernel::regular(const Vec2& x, const Vec2& y) const {
  require_interior(x);
  require_interior(y);
  if (domain_.is_disc()) return disc_regular(x, y).value;
  return rect_direct_regular(x - y) - rect_images(x, y, false).value;
}

KernelEval GreenKernel::green_derivatives(const Vec2& x, const Vec2& y) const {
  require_interior(x);
  require_interior(y);
  require_distinct(x, y);
  if (domain_.is_disc()) return subtract(free_space_kernel(x, y), disc_regular(x, y));
  return rect_images(x, y, true);
}

KernelEval GreenKernel::regular_derivatives(const Vec2& x, const Vec2& y) const {
  require_interior(x);
  require_interior(y);
  if (domain_.is_disc()) return disc_regular(x, y);
  require_distinct(x, y);
  KernelEval k = subtract(free_space_kernel(x, y), rect_images(x, y, true));
  k.value = regular(x, y);
  return k;
}

RobinEval GreenKernel::robin(const Vec2& x) const {
  require_interior(x);
  RobinEval r;
  if (domain_.is_disc()) {
    const KernelEval k = disc_regular(x, x);
    r.value = k.value;
    r.grad = k.grad_x + k.grad_y;
    r.hess = k.hess_xx + k.hess_xy + k.hess_xy.transpose() + k.hess_yy;
    r.hess = 0.5 * (r.hess + r.hess.transpose()).eval();
    return r;
  }
  // The direct image only depends on x - y, so it adds a constant to R.
  const KernelEval k = scale(rect_images(x, x, false), -1.0);
  r.value = rect_direct_regular(Vec2::Zero()) + k.value;
  r.grad = k.grad_x + k.grad_y;
  r.hess = k.hess_xx + k.hess_xy + k.hess_xy.transpose() + k.hess_yy;
  r.hess = 0.5 * (r.hess + r.hess.transpose()).eval();
  return r;
}

double green_value(const Domain& domain, const Vec2& x, const Vec2& y) {
  return GreenKernel(domain).green(x, y);
}

double green_regular_part(const Domain& domain, const Vec2& x, const Vec2& y) {
  return GreenKernel(domain).regular(x, y);
}

RobinEval robin_eval(const Domain& domain, const Vec2& x) { return GreenKernel(domain).robin(x); }

KernelEval green_derivatives(const Domain& domain, const Vec2& x, const Vec2& y) {
  return GreenKernel(domain).green_derivatives(x, y);
}

}  // namespace sinhlab
