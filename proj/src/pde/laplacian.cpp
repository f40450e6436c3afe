#include "sinhlab/laplacian.hpp"

#include <vector>

namespace sinhlab {

namespace {

/// Row k of the stencil as (diagonal, neighbour coefficients); missing neighbours get 0.
struct Row {
  double diag = 0.0;
  std::array<double, 4> off{};
};

Row stencil_row(const Mesh& mesh, int k, BoundaryScheme scheme) {
  const double h2 = mesh.h() * mesh.h();
  Row r;
  if (scheme == BoundaryScheme::ShortleyWeller) {
    for (int axis = 0; axis < 2; ++axis) {
      const int dp = 2 * axis, dm = 2 * axis + 1;
      const double tp = mesh.arm(k, dp), tm = mesh.arm(k, dm);
      r.diag += 2.0 / (tp * tm * h2);
      if (mesh.neighbour(k, dp) >= 0) r.off[dp] = -2.0 / (tp * (tp + tm) * h2);
      if (mesh.neighbour(k, dm) >= 0) r.off[dm] = -2.0 / (tm * (tp + tm) * h2);
    }
    return r;
  }
  for (int d = 0; d < 4; ++d) {
    if (mesh.neighbour(k, d) >= 0) {
      r.diag += 1.0 / h2;
      r.off[d] = -1.0 / h2;
    } else if (scheme == BoundaryScheme::CutCell) {
      r.diag += 1.0 / (mesh.arm(k, d) * h2);
    }
  }
  return r;
}

}  // namespace

SparseMatrix assemble_laplacian(const Mesh& mesh, BoundaryScheme scheme) {
  const int n = mesh.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * 5);
  for (int k = 0; k < n; ++k) {
    const Row r = stencil_row(mesh, k, scheme);
    trip.emplace_back(k, k, r.diag);
    for (int d = 0; d < 4; ++d) {
      const int j = mesh.neighbour(k, d);
      if (j >= 0) trip.emplace_back(k, j, r.off[d]);
    }
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

Eigen::VectorXd apply_laplacian(const Mesh& mesh, const Eigen::VectorXd& u, BoundaryScheme scheme) {
  const int n = mesh.size();
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    const Row r = stencil_row(mesh, k, scheme);
    double s = r.diag * u[k];
    for (int d = 0; d < 4; ++d) {
      const int j = mesh.neighbour(k, d);
      if (j >= 0) s += r.off[d] * u[j];
    }
    out[k] = s;
  }
  return out;
}

}  // namespace sinhlab
