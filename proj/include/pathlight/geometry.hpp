#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "pathlight/errors.hpp"

namespace pathlight {

/// 3D vector / point. Components are meters when used as a position.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

using Point3 = Vec3;

/// Distance in the ground plane; z is ignored.
inline double planar_distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// Unit quaternion. Checked construction rejects inputs whose norm deviates
/// from 1 by more than 1e-6 (corrupt calibration data) and renormalizes
/// everything else, so a stored quaternion is always unit to ~1e-16.
class UnitQuaternion {
 public:
  UnitQuaternion() = default;  // identity

  static UnitQuaternion identity() { return {}; }

  /// Validates finiteness and near-unit norm, then normalizes exactly.
  static UnitQuaternion from_components(double x, double y, double z, double w);

  /// Intrinsic Z-Y-X rotation: Rz(yaw) * Ry(pitch) * Rx(roll), radians.
  /// Matches the static-transform-publisher argument convention.
  static UnitQuaternion from_yaw_pitch_roll(double yaw, double pitch, double roll);

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  double w() const { return w_; }

  /// Hamilton product, renormalized.
  UnitQuaternion operator*(const UnitQuaternion& rhs) const;

  UnitQuaternion conjugate() const { return UnitQuaternion(-x_, -y_, -z_, w_); }

  Vec3 rotate(const Vec3& v) const;

  /// Smallest angle (radians, in [0, pi]) of the rotation taking *this to
  /// other. Zero for identical rotations, q and -q included.
  double angle_to(const UnitQuaternion& other) const;

 private:
  UnitQuaternion(double x, double y, double z, double w)
      : x_(x), y_(y), z_(z), w_(w) {}

  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
  double w_ = 1.0;
};

/// Rigid transform mapping points expressed in child_frame into parent_frame.
struct RigidTransform {
  Point3 translation;
  UnitQuaternion rotation;
  std::string parent_frame;
  std::string child_frame;

  static RigidTransform identity(std::string parent, std::string child) {
    return {{}, UnitQuaternion::identity(), std::move(parent), std::move(child)};
  }

  /// child coordinates -> parent coordinates.
  Point3 apply(const Point3& p) const { return rotation.rotate(p) + translation; }

  /// Directions rotate without translating.
  Vec3 rotate(const Vec3& v) const { return rotation.rotate(v); }
};

/// a maps b.child -> a.parent. Throws FrameError unless a.child == b.parent.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

/// Swaps parent and child; compose(t, invert(t)) is the identity.
RigidTransform invert(const RigidTransform& t);

/// Static-transform-publisher convention: translation (x, y, z) plus
/// intrinsic Z-Y-X Euler angles in radians. Throws ParamError on non-finite
/// input.
RigidTransform from_xyz_ypr(double x, double y, double z, double yaw,
                            double pitch, double roll, std::string parent_frame,
                            std::string child_frame);

/// Static forest of named frames. Every child frame has exactly one parent
/// edge and cycles are rejected, so each frame has a unique chain to the
/// root of its component. Immutable once loaded; safe to share across
/// threads.
class TransformTree {
 public:
  /// Throws FrameError on a self-edge, a duplicate child, or a cycle.
  void add(const RigidTransform& edge);

  /// Transform with parent_frame = from and child_frame = to; maps points
  /// expressed in `to` into `from`. lookup(f, f) is the identity. Throws
  /// FrameError, naming both frames, when they do not share a component.
  RigidTransform lookup(const std::string& from, const std::string& to) const;

  bool has_frame(const std::string& frame) const { return frames_.count(frame) > 0; }
  std::size_t edge_count() const { return parent_edge_.size(); }

 private:
  // Chain from `frame` up to its component root: returns the transform with
  // parent_frame = root, child_frame = frame.
  RigidTransform chain_to_root(const std::string& frame) const;

  std::map<std::string, RigidTransform> parent_edge_;  // keyed by child frame
  std::set<std::string> frames_;
};

/// Transform config: JSON object {"transforms": [{parent, child, x, y, z,
/// yaw, pitch, roll}, ...]}, angles in radians. Throws ParseError naming the
/// record and field.
TransformTree load_transform_config(std::string_view text);

}  // namespace pathlight
