#include "pathlight/geometry.hpp"

#include <algorithm>
#include <vector>

#include <json.hpp>

namespace pathlight {

namespace {

constexpr double kNormTolerance = 1e-6;

}  // namespace

UnitQuaternion UnitQuaternion::from_components(double x, double y, double z,
                                               double w) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) ||
      !std::isfinite(w)) {
    throw ParamError("quaternion components must be finite");
  }
  const double norm = std::sqrt(x * x + y * y + z * z + w * w);
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw ParamError("quaternion norm " + std::to_string(norm) +
                     " deviates from 1 by more than 1e-6");
  }
  return UnitQuaternion(x / norm, y / norm, z / norm, w / norm);
}

UnitQuaternion UnitQuaternion::from_yaw_pitch_roll(double yaw, double pitch,
                                                   double roll) {
  const double cy = std::cos(yaw * 0.5), sy = std::sin(yaw * 0.5);
  const double cp = std::cos(pitch * 0.5), sp = std::sin(pitch * 0.5);
  const double cr = std::cos(roll * 0.5), sr = std::sin(roll * 0.5);
  // qz(yaw) * qy(pitch) * qx(roll)
  return UnitQuaternion(sr * cp * cy - cr * sp * sy,
                        cr * sp * cy + sr * cp * sy,
                        cr * cp * sy - sr * sp * cy,
                        cr * cp * cy + sr * sp * sy);
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& r) const {
  double x = w_ * r.x_ + x_ * r.w_ + y_ * r.z_ - z_ * r.y_;
  double y = w_ * r.y_ - x_ * r.z_ + y_ * r.w_ + z_ * r.x_;
  double z = w_ * r.z_ + x_ * r.y_ - y_ * r.x_ + z_ * r.w_;
  double w = w_ * r.w_ - x_ * r.x_ - y_ * r.y_ - z_ * r.z_;
  const double norm = std::sqrt(x * x + y * y + z * z + w * w);
  return UnitQuaternion(x / norm, y / norm, z / norm, w / norm);
}

Vec3 UnitQuaternion::rotate(const Vec3& v) const {
  // v' = v + 2 w (q x v) + 2 q x (q x v)
  const Vec3 q{x_, y_, z_};
  const Vec3 t = q.cross(v) * 2.0;
  return v + t * w_ + q.cross(t);
}

double UnitQuaternion::angle_to(const UnitQuaternion& other) const {
  // Relative rotation r = conj(*this) * other; angle = 2 atan2(|vec|, |w|).
  // atan2 stays well-conditioned near zero where acos(dot) loses ~8 digits.
  const double rx = w_ * other.x_ - x_ * other.w_ - y_ * other.z_ + z_ * other.y_;
  const double ry = w_ * other.y_ + x_ * other.z_ - y_ * other.w_ - z_ * other.x_;
  const double rz = w_ * other.z_ - x_ * other.y_ + y_ * other.x_ - z_ * other.w_;
  const double rw = w_ * other.w_ + x_ * other.x_ + y_ * other.y_ + z_ * other.z_;
  return 2.0 * std::atan2(std::sqrt(rx * rx + ry * ry + rz * rz), std::abs(rw));
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  if (a.child_frame != b.parent_frame) {
    throw FrameError("cannot compose '" + a.parent_frame + "->" +
                     a.child_frame + "' with '" + b.parent_frame + "->" +
                     b.child_frame + "': child frame '" + a.child_frame +
                     "' does not match parent frame '" + b.parent_frame + "'");
  }
  RigidTransform out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation.rotate(b.translation) + a.translation;
  out.parent_frame = a.parent_frame;
  out.child_frame = b.child_frame;
  return out;
}

RigidTransform invert(const RigidTransform& t) {
  RigidTransform out;
  out.rotation = t.rotation.conjugate();
  out.translation = out.rotation.rotate(t.translation) * -1.0;
  out.parent_frame = t.child_frame;
  out.child_frame = t.parent_frame;
  return out;
}

RigidTransform from_xyz_ypr(double x, double y, double z, double yaw,
                            double pitch, double roll, std::string parent_frame,
                            std::string child_frame) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) ||
      !std::isfinite(yaw) || !std::isfinite(pitch) || !std::isfinite(roll)) {
    throw ParamError("transform parameters must be finite");
  }
  RigidTransform out;
  out.translation = {x, y, z};
  out.rotation = UnitQuaternion::from_yaw_pitch_roll(yaw, pitch, roll);
  out.parent_frame = std::move(parent_frame);
  out.child_frame = std::move(child_frame);
  return out;
}

void TransformTree::add(const RigidTransform& edge) {
  if (edge.parent_frame == edge.child_frame) {
    throw FrameError("transform edge may not connect frame '" +
                     edge.parent_frame + "' to itself");
  }
  if (edge.parent_frame.empty() || edge.child_frame.empty()) {
    throw FrameError("transform edge frames must be non-empty");
  }
  if (parent_edge_.count(edge.child_frame) > 0) {
    throw FrameError("frame '" + edge.child_frame +
                     "' already has a parent; a child frame may have only one");
  }
  // Walking up from the new parent must not reach the new child.
  for (std::string cur = edge.parent_frame;;) {
    auto it = parent_edge_.find(cur);
    if (it == parent_edge_.end()) break;
    cur = it->second.parent_frame;
    if (cur == edge.child_frame) {
      throw FrameError("adding edge '" + edge.parent_frame + "->" +
                       edge.child_frame + "' would create a cycle");
    }
  }
  parent_edge_.emplace(edge.child_frame, edge);
  frames_.insert(edge.parent_frame);
  frames_.insert(edge.child_frame);
}

RigidTransform TransformTree::chain_to_root(const std::string& frame) const {
  RigidTransform acc = RigidTransform::identity(frame, frame);
  for (std::string cur = frame;;) {
    auto it = parent_edge_.find(cur);
    if (it == parent_edge_.end()) break;
    acc = compose(it->second, acc);
    cur = it->second.parent_frame;
  }
  return acc;  // parent_frame is the component root
}

RigidTransform TransformTree::lookup(const std::string& from,
                                     const std::string& to) const {
  if (from == to) return RigidTransform::identity(from, to);
  if (!has_frame(from) || !has_frame(to)) {
    throw FrameError("transform lookup failed: frame '" + from + "' or '" +
                     to + "' is not in the tree");
  }
  const RigidTransform root_from = chain_to_root(from);
  const RigidTransform root_to = chain_to_root(to);
  if (root_from.parent_frame != root_to.parent_frame) {
    throw FrameError("no transform chain between '" + from + "' and '" + to +
                     "': frames live in disconnected components");
  }
  return compose(invert(root_from), root_to);
}

namespace {

double require_finite_number(const nlohmann::json& record,
                             const std::string& context, const char* field) {
  if (!record.contains(field)) {
    throw ParseError(context + ": missing field '" + std::string(field) + "'");
  }
  const auto& value = record.at(field);
  if (!value.is_number()) {
    throw ParseError(context + ": field '" + std::string(field) +
                     "' must be a number");
  }
  const double d = value.get<double>();
  if (!std::isfinite(d)) {
    throw ParseError(context + ": field '" + std::string(field) +
                     "' must be finite");
  }
  return d;
}

std::string require_string(const nlohmann::json& record,
                           const std::string& context, const char* field) {
  if (!record.contains(field) || !record.at(field).is_string()) {
    throw ParseError(context + ": missing string field '" +
                     std::string(field) + "'");
  }
  return record.at(field).get<std::string>();
}

}  // namespace

TransformTree load_transform_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("transform config: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("transforms") ||
      !doc.at("transforms").is_array()) {
    throw ParseError("transform config: expected object with a 'transforms' array");
  }
  TransformTree tree;
  std::size_t index = 0;
  for (const auto& record : doc.at("transforms")) {
    const std::string context = "transforms[" + std::to_string(index) + "]";
    if (!record.is_object()) {
      throw ParseError(context + ": expected an object");
    }
    const std::string parent = require_string(record, context, "parent");
    const std::string child = require_string(record, context, "child");
    const double x = require_finite_number(record, context, "x");
    const double y = require_finite_number(record, context, "y");
    const double z = require_finite_number(record, context, "z");
    const double yaw = require_finite_number(record, context, "yaw");
    const double pitch = require_finite_number(record, context, "pitch");
    const double roll = require_finite_number(record, context, "roll");
    try {
      tree.add(from_xyz_ypr(x, y, z, yaw, pitch, roll, parent, child));
    } catch (const FrameError& e) {
      throw ParseError(context + ": " + e.what());
    }
    ++index;
  }
  return tree;
}

}  // namespace pathlight
