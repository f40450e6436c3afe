#include "sinhlab/mesh.hpp"

#include "sinhlab/errors.hpp"

#include <cmath>

namespace sinhlab {

namespace {
/// Lattice points closer than this fraction of h to the boundary are dropped.
constexpr double kDropFraction = 1e-3;
}  // namespace

Mesh::Mesh(Domain domain, double h) : domain_(std::move(domain)), h_(h) {
  const auto [lo, hi] = domain_.bounding_box();
  origin_ = domain_.is_disc() ? domain_.disc_shape().center : lo;
  imin_ = static_cast<int>(std::floor((lo.x() - origin_.x()) / h_)) - 1;
  jmin_ = static_cast<int>(std::floor((lo.y() - origin_.y()) / h_)) - 1;
  ni_ = static_cast<int>(std::ceil((hi.x() - origin_.x()) / h_)) + 2 - imin_;
  nj_ = static_cast<int>(std::ceil((hi.y() - origin_.y()) / h_)) + 2 - jmin_;
  grid_.assign(static_cast<size_t>(ni_) * nj_, -1);

  const double drop = kDropFraction * h_;
  for (int jj = 0; jj < nj_; ++jj) {
    for (int ii = 0; ii < ni_; ++ii) {
      const int i = ii + imin_, j = jj + jmin_;
      const Vec2 p = origin_ + h_ * Vec2(i, j);
      if (domain_.boundary_distance(p) < drop) continue;
      grid_[static_cast<size_t>(jj) * ni_ + ii] = static_cast<int>(nodes_.size());
      nodes_.push_back(p);
      lattice_.emplace_back(i, j);
    }
  }

  nbr_.resize(nodes_.size());
  arm_.resize(nodes_.size());
  for (size_t k = 0; k < nodes_.size(); ++k) {
    for (int d = 0; d < 4; ++d) {
      const int n = locate(lattice_[k].x() + kOffsets[d][0], lattice_[k].y() + kOffsets[d][1]);
      nbr_[k][d] = n;
      if (n >= 0) {
        arm_[k][d] = 1.0;
      } else {
        const Vec2 dir(kOffsets[d][0], kOffsets[d][1]);
        arm_[k][d] = domain_.ray_to_boundary(nodes_[k], dir) / h_;
      }
    }
  }
}

bool Mesh::near_boundary(int k) const {
  for (int d = 0; d < 4; ++d)
    if (nbr_[k][d] < 0) return true;
  return false;
}

int Mesh::locate(int i, int j) const {
  const int ii = i - imin_, jj = j - jmin_;
  if (ii < 0 || jj < 0 || ii >= ni_ || jj >= nj_) return -1;
  return grid_[static_cast<size_t>(jj) * ni_ + ii];
}

int Mesh::nearest(const Vec2& p) const {
  const Vec2 s = (p - origin_) / h_;
  return locate(static_cast<int>(std::lround(s.x())), static_cast<int>(std::lround(s.y())));
}

double Mesh::interpolate(const Eigen::VectorXd& values, const Vec2& p) const {
  const Vec2 s = (p - origin_) / h_;
  const int i0 = static_cast<int>(std::floor(s.x()));
  const int j0 = static_cast<int>(std::floor(s.y()));
  const double fx = s.x() - i0, fy = s.y() - j0;
  auto at = [&](int i, int j) {
    const int k = locate(i, j);
    return k >= 0 ? values[k] : 0.0;
  };
  return (1 - fx) * (1 - fy) * at(i0, j0) + fx * (1 - fy) * at(i0 + 1, j0) +
         (1 - fx) * fy * at(i0, j0 + 1) + fx * fy * at(i0 + 1, j0 + 1);
}

MeshPtr build_mesh(const Domain& domain, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(Errc::ResolutionInvalid, "mesh spacing must be positive");
  if (h > domain.diameter() / 16.0)
    throw Error(Errc::ResolutionInvalid, "mesh spacing exceeds diameter/16");
  if (!domain.is_disc()) {
    const auto& r = domain.rectangle_shape();
    for (double side : {r.width, r.height}) {
      const double n = side / h;
      if (std::abs(n - std::round(n)) > 1e-9 * n)
        throw Error(Errc::ResolutionInvalid, "mesh spacing must divide the rectangle sides");
    }
  }
  auto mesh = std::make_shared<const Mesh>(domain, h);
  if (mesh->size() < 9) throw Error(Errc::ResolutionInvalid, "mesh has fewer than 9 nodes");
  return mesh;
}

GridField::GridField(MeshPtr m, Eigen::VectorXd v) : mesh(std::move(m)), values(std::move(v)) {
  if (!mesh || values.size() != mesh->size())
    throw Error(Errc::InvalidArgument, "field size does not match mesh");
}

GridField GridField::zeros(MeshPtr m) {
  const int n = m->size();
  return GridField(std::move(m), Eigen::VectorXd::Zero(n));
}

}  // namespace sinhlab
