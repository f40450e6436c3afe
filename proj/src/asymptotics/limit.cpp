#include "sinhlab/asymptotics.hpp"

#include "sinhlab/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace sinhlab {

LimitSpectrum limit_eigenproblem(double radius, double h, int count, const LimitOptions& opts) {
  if (!(radius >= 50.0)) throw Error(Errc::InvalidArgument, "limit problem needs a ball radius of at least 50");
  if (count < 4) throw Error(Errc::InvalidArgument, "limit problem needs at least four eigenvalues");
  const MeshPtr mesh = build_mesh(Domain::disc(radius, Vec2::Zero()), h);
  const int n = mesh->size();
  const SparseMatrix A = assemble_laplacian(
      *mesh, opts.truncation == Truncation::Natural ? BoundaryScheme::Natural : BoundaryScheme::CutCell);
  Eigen::VectorXd w(n);
  Eigen::MatrixXd basis(n, 3);
  for (int k = 0; k < n; ++k) {
    const Vec2& y = mesh->node(k);
    const double s = y.squaredNorm();
    w[k] = 1.0 / ((1.0 + s / 8.0) * (1.0 + s / 8.0));
    basis(k, 0) = y.x() / (8.0 + s);
    basis(k, 1) = y.y() / (8.0 + s);
    basis(k, 2) = (8.0 - s) / (8.0 + s);
  }
  EigenOptions eo;
  eo.sigma = opts.sigma;
  const SpectrumResult sr = eigenpairs(A, w, count, mesh, eo);

  LimitSpectrum out;
  out.eigenvalues = sr.eigenvalues;
  out.nodes = n;
  for (int j = 0; j < count; ++j)
    if (sr.eigenvalues[j] >= opts.window_lo && sr.eigenvalues[j] <= opts.window_hi) out.near_one.push_back(j);
  if (out.near_one.empty()) return out;

  Eigen::MatrixXd Q(n, static_cast<Eigen::Index>(out.near_one.size()));
  for (size_t c = 0; c < out.near_one.size(); ++c) Q.col(static_cast<Eigen::Index>(c)) = sr.vectors.col(out.near_one[c]);
  // W-orthonormalise the analytic span, then take singular values of the cross Gram matrix.
  const Eigen::MatrixXd gram = basis.transpose() * w.asDiagonal() * basis;
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  const Eigen::MatrixXd Bq = llt.matrixU().solve<Eigen::OnTheRight>(basis);
  const Eigen::MatrixXd cross = Q.transpose() * w.asDiagonal() * Bq;
  out.overlap = Eigen::JacobiSVD<Eigen::MatrixXd>(cross).singularValues().minCoeff();
  return out;
}

}  // namespace sinhlab
