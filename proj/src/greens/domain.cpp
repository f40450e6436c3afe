#include "sinhlab/domain.hpp"

#include "sinhlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sinhlab {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::Singularity: return "Singularity";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::SeriesNotConverged: return "SeriesNotConverged";
    case Errc::MeshTooCoarse: return "MeshTooCoarse";
    case Errc::PointsTooClose: return "PointsTooClose";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::LeftDomain: return "LeftDomain";
    case Errc::RhoTooLarge: return "RhoTooLarge";
    case Errc::TooCloseToPeak: return "TooCloseToPeak";
    case Errc::ResolutionInvalid: return "ResolutionInvalid";
    case Errc::NewtonDiverged: return "NewtonDiverged";
    case Errc::JacobianSingular: return "JacobianSingular";
    case Errc::ContinuationBroken: return "ContinuationBroken";
    case Errc::ExponentOverflow: return "ExponentOverflow";
    case Errc::EigSolverFailure: return "EigSolverFailure";
    case Errc::ZeroField: return "ZeroField";
    case Errc::SpectrumTruncated: return "SpectrumTruncated";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::RegimeMismatch: return "RegimeMismatch";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::MissingFits: return "MissingFits";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::BallNotAdmissible: return "BallNotAdmissible";
    case Errc::IncompleteRuns: return "IncompleteRuns";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Domain Domain::unit_disc() { return Domain{}; }

Domain Domain::disc(double radius, const Vec2& center) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(Errc::InvalidArgument, "disc radius must be positive");
  Domain d;
  d.kind_ = DomainKind::Disc;
  d.shape_ = DiscShape{radius, center};
  return d;
}

Domain Domain::rectangle(double width, double height) {
  if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height))
    throw Error(Errc::InvalidArgument, "rectangle sides must be positive");
  Domain d;
  d.kind_ = DomainKind::Rectangle;
  d.shape_ = RectangleShape{width, height};
  return d;
}

const DiscShape& Domain::disc_shape() const {
  if (!is_disc()) throw Error(Errc::InvalidArgument, "domain is not a disc");
  return std::get<DiscShape>(shape_);
}

const RectangleShape& Domain::rectangle_shape() const {
  if (is_disc()) throw Error(Errc::InvalidArgument, "domain is not a rectangle");
  return std::get<RectangleShape>(shape_);
}

double Domain::boundary_distance(const Vec2& x) const {
  if (is_disc()) {
    const auto& d = std::get<DiscShape>(shape_);
    return d.radius - (x - d.center).norm();
  }
  const auto& r = std::get<RectangleShape>(shape_);
  return std::min({x.x(), r.width - x.x(), x.y(), r.height - x.y()});
}

double Domain::ray_to_boundary(const Vec2& x, const Vec2& dir) const {
  if (is_disc()) {
    const auto& d = std::get<DiscShape>(shape_);
    const Vec2 p = x - d.center;
    const double b = p.dot(dir);
    const double c = p.squaredNorm() - d.radius * d.radius;
    return -b + std::sqrt(std::max(0.0, b * b - c));
  }
  const auto& r = std::get<RectangleShape>(shape_);
  double t = std::numeric_limits<double>::infinity();
  if (dir.x() > 0) t = std::min(t, (r.width - x.x()) / dir.x());
  if (dir.x() < 0) t = std::min(t, -x.x() / dir.x());
  if (dir.y() > 0) t = std::min(t, (r.height - x.y()) / dir.y());
  if (dir.y() < 0) t = std::min(t, -x.y() / dir.y());
  return t;
}

double Domain::diameter() const {
  if (is_disc()) return 2.0 * std::get<DiscShape>(shape_).radius;
  const auto& r = std::get<RectangleShape>(shape_);
  return std::hypot(r.width, r.height);
}

double Domain::length_scale() const {
  if (is_disc()) return std::get<DiscShape>(shape_).radius;
  const auto& r = std::get<RectangleShape>(shape_);
  return std::min(r.width, r.height);
}

std::pair<Vec2, Vec2> Domain::bounding_box() const {
  if (is_disc()) {
    const auto& d = std::get<DiscShape>(shape_);
    const Vec2 e(d.radius, d.radius);
    return {d.center - e, d.center + e};
  }
  const auto& r = std::get<RectangleShape>(shape_);
  return {Vec2::Zero(), Vec2(r.width, r.height)};
}

std::string Domain::kind_name() const {
  switch (kind_) {
    case DomainKind::UnitDisc: return "unit-disc";
    case DomainKind::Disc: return "disc";
    case DomainKind::Rectangle: return "rectangle";
  }
  return "unknown";
}

}  // namespace sinhlab
