#include "sinhlab/pde.hpp"

#include "sinhlab/ansatz.hpp"
#include "sinhlab/errors.hpp"

#include <Eigen/UmfPackSupport>

#include <cmath>
#include <limits>

namespace sinhlab {

namespace {

constexpr double kExpLimit = 700.0;

Eigen::VectorXd nonlinear_residual(const SparseMatrix& A, const Eigen::VectorXd& u, double rho) {
  return A * u - (2.0 * rho * rho) * u.array().sinh().matrix();
}

bool exponent_safe(const Eigen::VectorXd& u) { return u.allFinite() && u.cwiseAbs().maxCoeff() <= kExpLimit; }

}  // namespace

SolveResult solve_sinh_poisson(const GridField& seed, double rho, double tol, const SolverOptions& opts) {
  if (!seed.mesh) throw Error(Errc::InvalidArgument, "seed has no mesh");
  return solve_sinh_poisson(seed, assemble_laplacian(*seed.mesh, opts.scheme), rho, tol, opts);
}

SolveResult solve_sinh_poisson(const GridField& seed, const SparseMatrix& A, double rho, double tol,
                               const SolverOptions& opts) {
  if (!(rho > 0.0)) throw Error(Errc::InvalidArgument, "rho must be positive");
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  if (!seed.finite()) throw Error(Errc::InvalidArgument, "seed field is not finite");
  if (!exponent_safe(seed.values)) throw Error(Errc::ExponentOverflow, "seed exceeds the exponent range");

  Eigen::VectorXd u = seed.values;
  Eigen::VectorXd F = nonlinear_residual(A, u, rho);
  double res = F.cwiseAbs().maxCoeff();

  Eigen::UmfPackLU<SparseMatrix> lu;
  SparseMatrix J = A;
  bool analysed = false;
  int it = 0;
  for (; it < opts.max_iterations && res > tol; ++it) {
    const Eigen::VectorXd w = (2.0 * rho * rho) * u.array().cosh().matrix();
    J = A;
    for (int k = 0; k < J.outerSize(); ++k)
      for (SparseMatrix::InnerIterator e(J, k); e; ++e)
        if (e.row() == e.col()) e.valueRef() -= w[e.row()];
    if (!analysed) {
      lu.analyzePattern(J);
      analysed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw Error(Errc::JacobianSingular, "Newton Jacobian factorisation failed");
    const Eigen::VectorXd rhs = -F;
    const Eigen::VectorXd du = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !du.allFinite())
      throw Error(Errc::JacobianSingular, "Newton Jacobian solve failed");

    const double f2 = F.norm();
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= opts.min_step) {
      const Eigen::VectorXd trial = u + lambda * du;
      if (exponent_safe(trial)) {
        const Eigen::VectorXd Ft = nonlinear_residual(A, trial, rho);
        const double rt = Ft.cwiseAbs().maxCoeff();
        if (Ft.norm() <= (1.0 - 1e-4 * lambda) * f2 || rt <= tol) {
          u = trial;
          F = Ft;
          res = rt;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted)
      throw Error(Errc::NewtonDiverged, "no damped step reduces the residual (|N|_inf = " + std::to_string(res) +
                                            ", rho = " + std::to_string(rho) + ")");
  }

  SolveResult out{GridField(seed.mesh, u), {}};
  out.report.converged = res <= tol;
  out.report.iterations = it;
  out.report.final_residual = res;
  out.report.correction_h1 = discrete_h1_norm(GridField(seed.mesh, u - seed.values));
  if (!out.report.converged)
    throw Error(Errc::NewtonDiverged, "iteration cap reached with |N|_inf = " + std::to_string(res));
  return out;
}

void continuation_solve(const SignedConfig& config, const std::vector<double>& schedule, const MeshPtr& mesh,
                        double tol, std::vector<ContinuationStep>& out, const SolverOptions& opts) {
  for (size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0)) throw Error(Errc::InvalidArgument, "rho schedule must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw Error(Errc::InvalidArgument, "rho schedule must be strictly descending");
  }
  if (schedule.empty()) return;
  config.validate();
  const std::vector<double> taus = tau_values(config);
  const SparseMatrix A = assemble_laplacian(*mesh, opts.scheme);
  const SparseMatrix interior = assemble_laplacian(*mesh, BoundaryScheme::Natural);

  GridField prev;
  std::vector<Vec2> prev_peaks;
  double prev_rho = 0.0;
  for (double rho : schedule) {
    try {
      const GridField ansatz = approximate_solution(config, taus, rho, mesh, config.points);
      GridField seed = ansatz;
      if (prev.mesh) {
        seed.values = prev.values + approximate_solution(config, taus, rho, mesh, prev_peaks).values -
                      approximate_solution(config, taus, prev_rho, mesh, prev_peaks).values;
      }
      SolveResult r = solve_sinh_poisson(seed, A, rho, tol, opts);
      r.report.correction_h1 = discrete_h1_norm(GridField(mesh, r.u.values - ansatz.values), interior);
      r.report.peak_locations = locate_peaks(r.u, config);
      prev = r.u;
      prev_peaks = r.report.peak_locations;
      prev_rho = rho;
      out.push_back({rho, std::move(r.u), std::move(r.report)});
    } catch (const Error& e) {
      throw Error(Errc::ContinuationBroken, "rho = " + std::to_string(rho) + ": " + e.what());
    }
  }
}

std::vector<ContinuationStep> continuation_solve(const SignedConfig& config, const std::vector<double>& schedule,
                                                 const MeshPtr& mesh, double tol, const SolverOptions& opts) {
  std::vector<ContinuationStep> out;
  continuation_solve(config, schedule, mesh, tol, out, opts);
  return out;
}

double residual_norm(const GridField& u, double rho, BoundaryScheme scheme) {
  const Mesh& m = *u.mesh;
  const double h = m.h();
  double worst = 0.0;
  for (int k = 0; k < m.size(); ++k) {
    double lap = 0.0;
    if (scheme == BoundaryScheme::ShortleyWeller) {
      for (int axis = 0; axis < 2; ++axis) {
        const int dp = 2 * axis, dm = dp + 1;
        const double hp = m.arm(k, dp) * h, hm = m.arm(k, dm) * h;
        const double up = m.neighbour(k, dp) >= 0 ? u.values[m.neighbour(k, dp)] : 0.0;
        const double um = m.neighbour(k, dm) >= 0 ? u.values[m.neighbour(k, dm)] : 0.0;
        lap += 2.0 * ((up - u.values[k]) / hp - (u.values[k] - um) / hm) / (hp + hm);
      }
    } else {
      // Sum of face fluxes divided by the cell area.
      for (int d = 0; d < 4; ++d) {
        const int j = m.neighbour(k, d);
        if (j >= 0) lap += (u.values[j] - u.values[k]) / (h * h);
        else if (scheme == BoundaryScheme::CutCell) lap -= u.values[k] / (m.arm(k, d) * h * h);
      }
    }
    const double r = -lap - rho * rho * (std::exp(u.values[k]) - std::exp(-u.values[k]));
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double discrete_h1_norm(const GridField& d) {
  return discrete_h1_norm(d, assemble_laplacian(*d.mesh, BoundaryScheme::Natural));
}

double discrete_h1_norm(const GridField& d, const SparseMatrix& A) {
  const double h2 = d.mesh->h() * d.mesh->h();
  return std::sqrt(h2 * d.values.squaredNorm() + h2 * d.values.dot(A * d.values));
}

std::vector<Vec2> locate_peaks(const GridField& u, const SignedConfig& config) {
  const Mesh& m = *u.mesh;
  std::vector<Vec2> peaks;
  const double sep = config.min_separation();
  for (int k = 0; k < config.size(); ++k) {
    const Vec2& xi = config.points[k];
    const double radius = std::min({0.5 * sep, 0.5 * config.domain.boundary_distance(xi), 0.25});
    int best = -1;
    double bv = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < m.size(); ++n) {
      if ((m.node(n) - xi).norm() > radius) continue;
      const double v = config.signs[k] * u.values[n];
      if (v > bv) {
        bv = v;
        best = n;
      }
    }
    if (best < 0) throw Error(Errc::MeshTooCoarse, "no mesh node near a peak");
    Vec2 p = m.node(best);
    for (int axis = 0; axis < 2; ++axis) {
      const int jp = m.neighbour(best, 2 * axis), jm = m.neighbour(best, 2 * axis + 1);
      if (jp < 0 || jm < 0) continue;
      const double fp = config.signs[k] * u.values[jp], fm = config.signs[k] * u.values[jm];
      const double curv = fp - 2.0 * bv + fm;
      if (curv < 0.0) p[axis] += 0.5 * m.h() * (fm - fp) / curv;
    }
    peaks.push_back(p);
  }
  return peaks;
}

}  // namespace sinhlab
