#pragma once

#include <Eigen/Core>

#include <string>
#include <variant>

namespace sinhlab {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class DomainKind { UnitDisc, Disc, Rectangle };

struct DiscShape {
  double radius = 1.0;
  Vec2 center = Vec2::Zero();
};

/// Axis-aligned rectangle [0, width] x [0, height].
struct RectangleShape {
  double width = 1.0;
  double height = 1.0;
};

/// Model domain on which kernels and meshes live.
class Domain {
 public:
  static Domain unit_disc();
  static Domain disc(double radius, const Vec2& center);
  static Domain rectangle(double width, double height);

  DomainKind kind() const { return kind_; }
  bool is_disc() const { return kind_ != DomainKind::Rectangle; }
  const DiscShape& disc_shape() const;
  const RectangleShape& rectangle_shape() const;

  /// Signed distance to the boundary, positive inside.
  double boundary_distance(const Vec2& x) const;
  /// Length of the ray x + t*dir (|dir| = 1) up to the boundary, for interior x.
  double ray_to_boundary(const Vec2& x, const Vec2& dir) const;
  bool strictly_inside(const Vec2& x, double margin = 0.0) const {
    return boundary_distance(x) > margin;
  }

  double diameter() const;
  /// Characteristic length used to make tolerances scale-free.
  double length_scale() const;
  /// Bounding box as (lower corner, upper corner).
  std::pair<Vec2, Vec2> bounding_box() const;

  std::string kind_name() const;

 private:
  DomainKind kind_ = DomainKind::UnitDisc;
  std::variant<DiscShape, RectangleShape> shape_ = DiscShape{};
};

}  // namespace sinhlab
