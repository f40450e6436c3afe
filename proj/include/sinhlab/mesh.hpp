#pragma once

#include "sinhlab/domain.hpp"

#include <Eigen/Core>

#include <array>
#include <memory>
#include <vector>

namespace sinhlab {

/// Cartesian lattice restricted to the interior of a domain. Node (i,j) sits at
/// origin + h*(i,j). Each node stores its four axis neighbours (E, W, N, S) or -1 when
/// the boundary is crossed first, together with the arm length to the boundary in units of h.
class Mesh {
 public:
  static constexpr int kEast = 0, kWest = 1, kNorth = 2, kSouth = 3;
  static constexpr std::array<std::array<int, 2>, 4> kOffsets{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

  Mesh(Domain domain, double h);

  const Domain& domain() const { return domain_; }
  double h() const { return h_; }
  const Vec2& origin() const { return origin_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  const Vec2& node(int k) const { return nodes_[k]; }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const Eigen::Vector2i& lattice(int k) const { return lattice_[k]; }
  int neighbour(int k, int dir) const { return nbr_[k][dir]; }
  /// Arm length in units of h: 1 for interior links, in (0, 1] towards the boundary.
  double arm(int k, int dir) const { return arm_[k][dir]; }
  bool near_boundary(int k) const;

  /// Node index of lattice point (i,j), or -1.
  int locate(int i, int j) const;
  /// Index of the node nearest to p, or -1 when p is outside the lattice range.
  int nearest(const Vec2& p) const;
  /// Bilinear interpolation of nodal values at p; lattice points outside the mesh count as 0.
  double interpolate(const Eigen::VectorXd& values, const Vec2& p) const;

 private:
  Domain domain_;
  double h_;
  Vec2 origin_;
  int imin_ = 0, jmin_ = 0, ni_ = 0, nj_ = 0;
  std::vector<int> grid_;
  std::vector<Vec2> nodes_;
  std::vector<Eigen::Vector2i> lattice_;
  std::vector<std::array<int, 4>> nbr_;
  std::vector<std::array<double, 4>> arm_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Validated mesh construction: h must resolve the domain (h <= diameter/16) and, for
/// rectangles, divide both sides.
MeshPtr build_mesh(const Domain& domain, double h);

/// Scalar function sampled at the nodes of a mesh.
struct GridField {
  MeshPtr mesh;
  Eigen::VectorXd values;

  GridField() = default;
  GridField(MeshPtr m, Eigen::VectorXd v);
  static GridField zeros(MeshPtr m);
  int size() const { return static_cast<int>(values.size()); }
  bool finite() const { return values.allFinite(); }
};

}  // namespace sinhlab
