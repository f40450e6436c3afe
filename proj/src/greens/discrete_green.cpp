#include "sinhlab/errors.hpp"
#include "sinhlab/greens.hpp"
#include "sinhlab/laplacian.hpp"

#include <Eigen/CholmodSupport>

#include <cmath>

namespace sinhlab {

double discrete_green_crosscheck(const Domain& domain, double h, const Vec2& x, const Vec2& y) {
  if ((x - y).norm() < 2.0 * h) throw Error(Errc::MeshTooCoarse, "points closer than two mesh cells");
  MeshPtr mesh;
  try {
    mesh = build_mesh(domain, h);
  } catch (const Error& e) {
    throw Error(Errc::MeshTooCoarse, e.what());
  }
  const SparseMatrix A = assemble_laplacian(*mesh);

  // Unit mass spread bilinearly over the cell containing y.
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh->size());
  const Vec2 s = (y - mesh->origin()) / h;
  const int i0 = static_cast<int>(std::floor(s.x()));
  const int j0 = static_cast<int>(std::floor(s.y()));
  const double fx = s.x() - i0, fy = s.y() - j0;
  const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  const int di[4] = {0, 1, 0, 1}, dj[4] = {0, 0, 1, 1};
  for (int c = 0; c < 4; ++c) {
    if (w[c] == 0.0) continue;
    const int k = mesh->locate(i0 + di[c], j0 + dj[c]);
    if (k < 0) throw Error(Errc::MeshTooCoarse, "source cell touches the boundary");
    b[k] += w[c] / (h * h);
  }

  Eigen::CholmodDecomposition<SparseMatrix> chol(A);
  if (chol.info() != Eigen::Success) throw Error(Errc::JacobianSingular, "Laplacian factorisation failed");
  const Eigen::VectorXd u = chol.solve(b);
  return mesh->interpolate(u, x);
}

}  // namespace sinhlab
