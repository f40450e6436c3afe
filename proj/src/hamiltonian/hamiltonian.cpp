#include "sinhlab/hamiltonian.hpp"

#include "sinhlab/ansatz.hpp"
#include "sinhlab/errors.hpp"
#include "sinhlab/greens.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace sinhlab {

void SignedConfig::validate() const {
  if (points.empty()) throw Error(Errc::InvalidArgument, "configuration needs at least one point");
  if (signs.size() != points.size()) throw Error(Errc::InvalidArgument, "one sign per point required");
  for (int s : signs)
    if (s != 1 && s != -1) throw Error(Errc::InvalidArgument, "signs must be +1 or -1");
  if (!(separation_floor > 0.0)) throw Error(Errc::InvalidArgument, "separation floor must be positive");
  for (const Vec2& p : points)
    if (!p.allFinite() || domain.boundary_distance(p) <= GreenKernel::boundary_margin * domain.length_scale())
      throw Error(Errc::OutOfDomain, "configuration point outside the domain");
  if (min_separation() < 2.0 * separation_floor)
    throw Error(Errc::PointsTooClose, "configuration points closer than the separation floor");
}

double SignedConfig::min_separation() const {
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j) d = std::min(d, (points[i] - points[j]).norm());
  return d;
}

Eigen::VectorXd SignedConfig::coordinates() const {
  const int m = size();
  Eigen::VectorXd z(2 * m);
  for (int k = 0; k < m; ++k) {
    z[k] = points[k].x();
    z[m + k] = points[k].y();
  }
  return z;
}

SignedConfig SignedConfig::with_coordinates(const Eigen::VectorXd& z) const {
  SignedConfig c = *this;
  const int m = size();
  for (int k = 0; k < m; ++k) c.points[k] = Vec2(z[k], z[m + k]);
  return c;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Min: return "min";
    case Classification::Max: return "max";
    case Classification::Saddle: return "saddle";
    case Classification::Degenerate: return "degenerate";
  }
  return "unknown";
}

double hamiltonian_value(const SignedConfig& config) {
  config.validate();
  const GreenKernel g(config.domain);
  const int m = config.size();
  double f = 0.0;
  for (int k = 0; k < m; ++k) {
    f -= 0.5 * g.robin(config.points[k]).value;
    for (int j = k + 1; j < m; ++j)
      f += config.signs[k] * config.signs[j] * g.green(config.points[k], config.points[j]);
  }
  return f;
}

HamiltonianDerivatives hamiltonian_derivatives(const SignedConfig& config) {
  config.validate();
  const GreenKernel g(config.domain);
  const int m = config.size();
  HamiltonianDerivatives d;
  d.gradient = Eigen::VectorXd::Zero(2 * m);
  d.hessian = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  auto idx = [m](int k, int c) { return c * m + k; };
  for (int k = 0; k < m; ++k) {
    const RobinEval r = g.robin(config.points[k]);
    Vec2 grad = -0.5 * r.grad;
    Mat2 diag = -0.5 * r.hess;
    for (int j = 0; j < m; ++j) {
      if (j == k) continue;
      const double s = config.signs[k] * config.signs[j];
      const KernelEval e = g.green_derivatives(config.points[k], config.points[j]);
      grad += s * e.grad_x;
      diag += s * e.hess_xx;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) d.hessian(idx(k, a), idx(j, b)) = s * e.hess_xy(a, b);
    }
    for (int a = 0; a < 2; ++a) {
      d.gradient[idx(k, a)] = grad[a];
      for (int b = 0; b < 2; ++b) d.hessian(idx(k, a), idx(k, b)) = diag(a, b);
    }
  }
  d.hessian = 0.5 * (d.hessian + d.hessian.transpose()).eval();
  return d;
}

CriticalPointResult classify_critical_point(const SignedConfig& config) {
  const HamiltonianDerivatives d = hamiltonian_derivatives(config);
  CriticalPointResult res;
  res.config = config;
  res.grad_norm = d.gradient.norm();
  res.hess = d.hessian;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.hessian, Eigen::EigenvaluesOnly);
  res.hess_eigenvalues = es.eigenvalues();
  const double band = kDegeneracyBand * res.hess_eigenvalues.cwiseAbs().maxCoeff();
  int neg = 0, pos = 0, zero = 0;
  for (double l : res.hess_eigenvalues) {
    if (l < -band) ++neg;
    else if (l > band) ++pos;
    else ++zero;
  }
  res.negative_count = neg;
  if (zero > 0) res.classification = Classification::Degenerate;
  else if (neg == 0) res.classification = Classification::Min;
  else if (pos == 0) res.classification = Classification::Max;
  else res.classification = Classification::Saddle;
  return res;
}

CriticalPointResult find_critical_point(const SignedConfig& seed, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  seed.validate();
  SignedConfig cur = seed;
  auto admissible = [&](const SignedConfig& c) {
    try {
      c.validate();
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  for (int it = 0; it < max_iterations; ++it) {
    const HamiltonianDerivatives d = hamiltonian_derivatives(cur);
    const double g2 = d.gradient.squaredNorm();
    if (std::sqrt(g2) <= tol) {
      CriticalPointResult res = classify_critical_point(cur);
      res.iterations = it;
      return res;
    }
    // Pseudo-inverse Newton step.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.hessian);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double cut = 1e-10 * lam.cwiseAbs().maxCoeff();
    Eigen::VectorXd coef = es.eigenvectors().transpose() * d.gradient;
    for (int i = 0; i < coef.size(); ++i) coef[i] = std::abs(lam[i]) > cut ? coef[i] / lam[i] : 0.0;
    const Eigen::VectorXd step = -(es.eigenvectors() * coef);

    const Eigen::VectorXd z = cur.coordinates();
    double t = 1.0;
    bool accepted = false, inside = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      const SignedConfig trial = cur.with_coordinates(z + t * step);
      if (!admissible(trial)) continue;
      inside = true;
      if (hamiltonian_derivatives(trial).gradient.squaredNorm() <= (1.0 - 1e-4 * t) * g2) {
        cur = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!inside) throw Error(Errc::LeftDomain, "Newton iterate left the admissible set");
      throw Error(Errc::NoConvergence, "line search failed at |grad F| = " + std::to_string(std::sqrt(g2)));
    }
  }
  throw Error(Errc::NoConvergence, "iteration cap reached");
}

ScaledHessian scaled_hessian_spectrum(const SignedConfig& config, double rho) {
  if (!(rho > 0.0)) throw Error(Errc::InvalidArgument, "rho must be positive");
  const HamiltonianDerivatives d = hamiltonian_derivatives(config);
  const std::vector<double> taus = tau_values(config);
  const int m = config.size();
  ScaledHessian s;
  s.D.resize(2 * m);
  for (int k = 0; k < m; ++k) s.D[k] = s.D[m + k] = taus[k];
  s.matrix = s.D.asDiagonal() * d.hessian * s.D.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.matrix, Eigen::EigenvaluesOnly);
  s.etas = es.eigenvalues();
  s.mu_pred = (1.0 - 3.0 * std::numbers::pi * rho * rho * s.etas.array()).matrix();
  return s;
}

}  // namespace sinhlab
