#include "sinhlab/spectrum.hpp"

#include "sinhlab/errors.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/Eigenvalues>
#include <Eigen/UmfPackSupport>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

extern "C" {
void dsaupd_c(int* ido, char const* bmat, int n, char const* which, int nev, double tol, double* resid, int ncv,
              double* v, int ldv, int* iparam, int* ipntr, double* workd, double* workl, int lworkl, int* info);
void dseupd_c(int rvec, char const* howmny, int const* select, double* d, double* z, int ldz, double sigma,
              char const* bmat, int n, char const* which, int nev, double tol, double* resid, int ncv, double* v,
              int ldv, int* iparam, int* ipntr, double* workd, double* workl, int lworkl, int* info);
}

namespace sinhlab {

namespace {

/// Solver for (A - sigma W) x = b: Cholesky when positive definite, LU otherwise.
class ShiftedSolver {
 public:
  ShiftedSolver(const SparseMatrix& A, const Eigen::VectorXd& w, double sigma) {
    M_ = A;
    for (int k = 0; k < M_.outerSize(); ++k)
      for (SparseMatrix::InnerIterator e(M_, k); e; ++e)
        if (e.row() == e.col()) e.valueRef() -= sigma * w[e.row()];
    chol_.compute(M_);
    if (chol_.info() == Eigen::Success) return;
    use_lu_ = true;
    lu_.compute(M_);
    if (lu_.info() != Eigen::Success) throw Error(Errc::EigSolverFailure, "shifted operator is singular");
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = use_lu_ ? Eigen::VectorXd(lu_.solve(b)) : Eigen::VectorXd(chol_.solve(b));
    return x;
  }

 private:
  SparseMatrix M_;
  Eigen::CholmodDecomposition<SparseMatrix> chol_;
  mutable Eigen::UmfPackLU<SparseMatrix> lu_;
  bool use_lu_ = false;
};

void arpack_shift_invert(const SparseMatrix& A, const Eigen::VectorXd& w, int K, const EigenOptions& opts,
                         Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  const int n = static_cast<int>(A.rows());
  const ShiftedSolver solver(A, w, opts.sigma);
  const int ncv = std::min(n, std::max(2 * K + 1, 24));
  const int lworkl = ncv * (ncv + 8);
  std::vector<double> resid(n), V(static_cast<size_t>(n) * ncv), workd(3 * static_cast<size_t>(n)), workl(lworkl);
  std::mt19937 gen(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double& r : resid) r = uni(gen);
  int iparam[11] = {0}, ipntr[14] = {0};
  iparam[0] = 1;
  iparam[2] = opts.max_iterations;
  iparam[6] = 3;
  int ido = 0, info = 1;
  const char bmat[] = "G", which[] = "LM";
  while (true) {
    dsaupd_c(&ido, bmat, n, which, K, opts.tol, resid.data(), ncv, V.data(), n, iparam, ipntr, workd.data(),
             workl.data(), lworkl, &info);
    if (ido == 99) break;
    Eigen::Map<Eigen::VectorXd> x(&workd[ipntr[0] - 1], n);
    Eigen::Map<Eigen::VectorXd> y(&workd[ipntr[1] - 1], n);
    if (ido == -1) {
      y = solver.solve(w.cwiseProduct(x));
    } else if (ido == 1) {
      Eigen::Map<Eigen::VectorXd> bx(&workd[ipntr[2] - 1], n);
      y = solver.solve(bx);
    } else if (ido == 2) {
      y = w.cwiseProduct(x);
    } else {
      throw Error(Errc::EigSolverFailure, "unexpected ARPACK request " + std::to_string(ido));
    }
  }
  if (info < 0) throw Error(Errc::EigSolverFailure, "dsaupd info " + std::to_string(info));
  if (info == 1) throw Error(Errc::EigSolverFailure, "ARPACK reached its iteration limit");

  std::vector<int> select(ncv, 1);
  std::vector<double> d(K);
  std::vector<double> z(static_cast<size_t>(n) * K);
  int einfo = 0;
  dseupd_c(1, "A", select.data(), d.data(), z.data(), n, opts.sigma, bmat, n, which, K, opts.tol, resid.data(),
           ncv, V.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl, &einfo);
  if (einfo != 0) throw Error(Errc::EigSolverFailure, "dseupd info " + std::to_string(einfo));
  const int nconv = iparam[4];
  if (nconv < K) throw Error(Errc::EigSolverFailure, "only " + std::to_string(nconv) + " eigenpairs converged");
  values = Eigen::Map<Eigen::VectorXd>(d.data(), K);
  vectors = Eigen::Map<Eigen::MatrixXd>(z.data(), n, K);
}

void dense_generalized(const SparseMatrix& A, const Eigen::VectorXd& w, int K, Eigen::VectorXd& values,
                       Eigen::MatrixXd& vectors) {
  const Eigen::MatrixXd Ad = Eigen::MatrixXd(A);
  const Eigen::MatrixXd Wd = w.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Ad + Ad.transpose()), Wd);
  if (es.info() != Eigen::Success) throw Error(Errc::EigSolverFailure, "dense generalized solver failed");
  values = es.eigenvalues().head(K);
  vectors = es.eigenvectors().leftCols(K);
}

}  // namespace

Eigen::VectorXd assemble_weight(const GridField& u, double rho) {
  if (!u.finite()) throw Error(Errc::InvalidArgument, "field is not finite");
  if (u.values.size() > 0 && u.values.cwiseAbs().maxCoeff() > 700.0)
    throw Error(Errc::ExponentOverflow, "|u| > 700");
  return (2.0 * rho * rho) * u.values.array().cosh().matrix();
}

SpectrumResult eigenpairs(const SparseMatrix& A, const Eigen::VectorXd& weight, int K, const MeshPtr& mesh,
                          const EigenOptions& opts) {
  const int n = static_cast<int>(A.rows());
  if (K < 1 || K >= n) throw Error(Errc::InvalidArgument, "eigenvalue count must lie in [1, n)");
  if (weight.size() != n || !(weight.minCoeff() > 0.0))
    throw Error(Errc::InvalidArgument, "weight must be positive with one entry per node");
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  if (n < opts.dense_threshold) dense_generalized(A, weight, K, values, vectors);
  else arpack_shift_invert(A, weight, K, opts, values, vectors);

  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  SpectrumResult r;
  r.eigenvalues.resize(K);
  r.vectors.resize(n, K);
  for (int j = 0; j < K; ++j) {
    r.eigenvalues[j] = values[order[j]];
    r.vectors.col(j) = vectors.col(order[j]);
  }
  for (int j = 0; j < K; ++j) {
    // W-normalise (ARPACK already does; the dense path may differ by rounding).
    const double nrm = std::sqrt(r.vectors.col(j).dot(weight.cwiseProduct(r.vectors.col(j))));
    r.vectors.col(j) /= nrm;
    r.eigenfields.push_back(sup_normalize(GridField(mesh, r.vectors.col(j))));
  }
  r.clusters = eigenvalue_clusters(r.eigenvalues);
  r.morse_index = static_cast<int>((r.eigenvalues.array() < 1.0).count());
  return r;
}

GridField sup_normalize(const GridField& v) {
  if (v.values.size() == 0) throw Error(Errc::ZeroField, "empty field");
  Eigen::Index imax = 0;
  const double m = v.values.cwiseAbs().maxCoeff(&imax);
  if (!(m > 0.0)) throw Error(Errc::ZeroField, "field vanishes identically");
  const double s = v.values[imax] > 0 ? 1.0 / m : -1.0 / m;
  return GridField(v.mesh, s * v.values);
}

std::vector<std::vector<int>> eigenvalue_clusters(const Eigen::VectorXd& mu, double rel_tol) {
  std::vector<std::vector<int>> out;
  for (int j = 0; j < mu.size(); ++j) {
    if (!out.empty()) {
      const double prev = mu[out.back().back()];
      if (std::abs(mu[j] - prev) <= rel_tol * std::max({std::abs(mu[j]), std::abs(prev), 1e-300})) {
        out.back().push_back(j);
        continue;
      }
    }
    out.push_back({j});
  }
  return out;
}

MorseCount morse_index(const SpectrumResult& result, double solver_tol) {
  const Eigen::VectorXd& mu = result.eigenvalues;
  if (mu.size() == 0 || mu[mu.size() - 1] < 1.0)
    throw Error(Errc::SpectrumTruncated, "largest computed eigenvalue is below 1");
  MorseCount c;
  c.band = std::max(5.0 * result.rho * result.rho, 10.0 * solver_tol);
  for (int j = 0; j < mu.size(); ++j) {
    if (mu[j] < 1.0) ++c.index;
    if (std::abs(mu[j] - 1.0) < c.band) c.ambiguous.push_back(j);
  }
  return c;
}

double admissible_rescale_radius(const Domain& domain, const Vec2& peak, double tau, double rho) {
  return std::sqrt(8.0) * domain.boundary_distance(peak) / (tau * rho);
}

RescaledProfile rescale_eigenfunction(const GridField& v, const std::vector<Vec2>& peaks,
                                      const std::vector<double>& taus, double rho, int k,
                                      const RescaleOptions& opts) {
  if (k < 0 || k >= static_cast<int>(peaks.size()) || k >= static_cast<int>(taus.size()))
    throw Error(Errc::InvalidArgument, "peak index out of range");
  const Mesh& mesh = *v.mesh;
  RescaledProfile p;
  p.peak = k;
  p.scale = taus[k] * rho / std::sqrt(8.0);
  if (opts.radius >= admissible_rescale_radius(mesh.domain(), peaks[k], taus[k], rho))
    throw Error(Errc::OutOfDomain, "rescaled sample disc leaves the domain");
  const int n = static_cast<int>(std::floor(opts.radius / opts.spacing));
  for (int j = -n; j <= n; ++j) {
    for (int i = -n; i <= n; ++i) {
      const Vec2 y(i * opts.spacing, j * opts.spacing);
      if (y.norm() > opts.radius) continue;
      p.points.push_back(y);
    }
  }
  p.values.resize(static_cast<Eigen::Index>(p.points.size()));
  for (size_t s = 0; s < p.points.size(); ++s)
    p.values[static_cast<Eigen::Index>(s)] = mesh.interpolate(v.values, p.scale * p.points[s] + peaks[k]);
  return p;
}

}  // namespace sinhlab
