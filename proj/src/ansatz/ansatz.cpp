#include "sinhlab/ansatz.hpp"

#include "sinhlab/errors.hpp"

#include <cmath>
#include <numbers>

namespace sinhlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<double> tau_values(const SignedConfig& config) {
  config.validate();
  const GreenKernel g(config.domain);
  const int m = config.size();
  std::vector<double> taus(m);
  for (int k = 0; k < m; ++k) {
    double e = -g.robin(config.points[k]).value;
    for (int i = 0; i < m; ++i)
      if (i != k) e += config.signs[k] * config.signs[i] * g.green(config.points[k], config.points[i]);
    taus[k] = std::exp(4.0 * kPi * e) / std::sqrt(8.0);
  }
  return taus;
}

double bubble_value(const BubbleParams& p, const Vec2& x) {
  const double t2 = p.tau * p.tau;
  const double den = t2 * p.rho * p.rho + (x - p.center).squaredNorm();
  return std::log(8.0 * t2) - 2.0 * std::log(den);
}

double projected_bubble_value(const BubbleParams& p, const GreenKernel& kernel, const Vec2& x) {
  const double t2 = p.tau * p.tau;
  const double den = t2 * p.rho * p.rho + (x - p.center).squaredNorm();
  return -2.0 * std::log(den) - 8.0 * kPi * kernel.regular(x, p.center);
}

double projected_bubble_value(const BubbleParams& p, const Domain& domain, const Vec2& x) {
  return projected_bubble_value(p, GreenKernel(domain), x);
}

GridField approximate_solution(const SignedConfig& config, const std::vector<double>& taus, double rho,
                               const MeshPtr& mesh, const std::vector<Vec2>& centers) {
  config.validate();
  if (!(rho > 0.0)) throw Error(Errc::InvalidArgument, "rho must be positive");
  const int m = config.size();
  if (static_cast<int>(taus.size()) != m || static_cast<int>(centers.size()) != m)
    throw Error(Errc::InvalidArgument, "one tau and one centre per peak required");
  double sep = config.min_separation();
  for (const Vec2& c : centers) sep = std::min(sep, config.domain.boundary_distance(c));
  for (double t : taus)
    if (t * rho >= sep / 10.0) throw Error(Errc::RhoTooLarge, "bubble scale tau*rho exceeds separation/10");

  const GreenKernel g(config.domain);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh->size());
  for (int k = 0; k < m; ++k) {
    const BubbleParams p{taus[k], centers[k], rho, config.signs[k]};
    for (int n = 0; n < mesh->size(); ++n) u[n] += p.sign * projected_bubble_value(p, g, mesh->node(n));
  }
  return GridField(mesh, std::move(u));
}

GridField approximate_solution(const SignedConfig& config, double rho, const MeshPtr& mesh) {
  return approximate_solution(config, tau_values(config), rho, mesh, config.points);
}

double far_field_limit(const SignedConfig& config, const Vec2& x) {
  config.validate();
  const GreenKernel g(config.domain);
  double s = 0.0;
  for (int k = 0; k < config.size(); ++k) {
    if ((x - config.points[k]).norm() < 0.1) throw Error(Errc::TooCloseToPeak, "probe within 0.1 of a peak");
    s += config.signs[k] * g.green(x, config.points[k]);
  }
  return 8.0 * kPi * s;
}

}  // namespace sinhlab
