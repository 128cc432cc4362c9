#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "pathlight/geometry.hpp"

namespace pathlight {

/// Radial-tangential lens distortion coefficients. All zero degrades to the
/// pure pinhole model bit-for-bit.
struct RadTanCoeffs {
  double k1 = 0.0;
  double k2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double k3 = 0.0;

  bool operator==(const RadTanCoeffs&) const = default;
};

/// Pinhole intrinsics. Pixel (0, 0) is the top-left pixel center, u grows
/// rightward, v downward; the image spans [-0.5, width - 0.5] horizontally.
struct Intrinsics {
  int width_px = 0;
  int height_px = 0;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  std::optional<RadTanCoeffs> distortion;  // nullopt = "none"

  bool operator==(const Intrinsics&) const = default;
};

/// Projector = pinhole camera run in reverse. The lens frame follows camera
/// convention: +Z along the projection axis, +X right and +Y down in the
/// image. mount maps lens coordinates into the robot base frame.
struct ProjectorConfig {
  Intrinsics intrinsics;
  RigidTransform mount;  // robot base -> projector lens
  double throw_min_m = 0.0;
  double throw_max_m = 0.0;
};

struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

/// Lens pose in the world: compose(robot_pose, cfg.mount). robot_pose maps
/// robot-base coordinates into the world frame.
RigidTransform lens_in_world(const ProjectorConfig& cfg,
                             const RigidTransform& robot_pose);

/// Project a world point through the lens onto the image. The result may lie
/// outside the image bounds; callers clip. Throws ProjectionError when the
/// point is at or behind the lens plane (depth <= 1e-9).
PixelCoord project_point(const ProjectorConfig& cfg,
                         const RigidTransform& robot_pose,
                         const Point3& p_world);

/// Intersect the pixel's ray with the ground plane z = 0. Throws
/// ProjectionError when the ray is level or ascending, or the hit would be
/// behind the lens. Distorted configs undistort iteratively to 1e-10.
Point3 unproject_to_ground(const ProjectorConfig& cfg,
                           const RigidTransform& robot_pose, PixelCoord pixel);

/// Illuminated ground region. Corners are the image boundary corners
/// unprojected, in top-left, top-right, bottom-right, bottom-left image
/// order. The near edge is the image's bottom row, the far edge its top row.
struct GroundFootprint {
  std::array<Point3, 4> corners;  // TL, TR, BR, BL
  double near_width_m = 0.0;
  double far_width_m = 0.0;
  double depth_m = 0.0;  // distance between far- and near-edge midpoints
  double area_m2 = 0.0;  // shoelace area of the quadrilateral
};

/// Throws ProjectionError when any corner ray misses the ground.
GroundFootprint ground_footprint(const ProjectorConfig& cfg,
                                 const RigidTransform& robot_pose);

enum class ThrowStatus { Ok, TooClose, TooFar, Undefined };

struct ThrowReport {
  ThrowStatus status = ThrowStatus::Undefined;
  double axis_distance_m = 0.0;  // lens to ground along the optical axis
  double throw_min_m = 0.0;
  double throw_max_m = 0.0;
  std::string message;

  bool ok() const { return status == ThrowStatus::Ok; }
};

/// Distance is measured along the optical axis to the ground plane, not
/// vertically. The throw range is inclusive at both ends.
ThrowReport validate_throw(const ProjectorConfig& cfg,
                           const RigidTransform& robot_pose);

/// Calibration file: JSON object
///   {image_width, image_height,
///    camera_matrix: [fx 0 cx 0 fy cy 0 0 1] | fx, fy, cx, cy,
///    distortion_model: "none"|"radtan", distortion_coefficients: [5],
///    throw_min_m, throw_max_m}
/// Exactly one of camera_matrix or fx/fy/cx/cy must be present; a matrix
/// with skew or an inhomogeneous bottom row is rejected. The mount transform
/// is not part of the file; the returned config carries an identity
/// base->lens mount for the caller to replace. Throws ParseError naming the
/// offending field.
ProjectorConfig load_projector_config(std::string_view text);

/// Canonical form (explicit fx/fy/cx/cy); load(serialize(load(x))) equals
/// load(x).
std::string serialize_projector_config(const ProjectorConfig& cfg);

}  // namespace pathlight
