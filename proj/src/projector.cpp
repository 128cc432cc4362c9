#include "pathlight/projector.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace pathlight {

namespace {

constexpr double kMinDepth = 1e-9;
constexpr double kUndistortTolerance = 1e-10;
constexpr int kUndistortMaxIterations = 100;

struct Normalized {
  double x = 0.0;
  double y = 0.0;
};

Normalized distort(const RadTanCoeffs& d, double x, double y) {
  const double r2 = x * x + y * y;
  const double radial = 1.0 + r2 * (d.k1 + r2 * (d.k2 + r2 * d.k3));
  return {x * radial + 2.0 * d.p1 * x * y + d.p2 * (r2 + 2.0 * x * x),
          y * radial + d.p1 * (r2 + 2.0 * y * y) + 2.0 * d.p2 * x * y};
}

// Fixed-point inverse of distort(); converges quickly for the small
// coefficients a calibrated lens produces.
Normalized undistort(const RadTanCoeffs& d, double xd, double yd) {
  double x = xd;
  double y = yd;
  for (int i = 0; i < kUndistortMaxIterations; ++i) {
    const double r2 = x * x + y * y;
    const double radial = 1.0 + r2 * (d.k1 + r2 * (d.k2 + r2 * d.k3));
    const double tang_x = 2.0 * d.p1 * x * y + d.p2 * (r2 + 2.0 * x * x);
    const double tang_y = d.p1 * (r2 + 2.0 * y * y) + 2.0 * d.p2 * x * y;
    const double next_x = (xd - tang_x) / radial;
    const double next_y = (yd - tang_y) / radial;
    const bool converged = std::abs(next_x - x) <= kUndistortTolerance &&
                           std::abs(next_y - y) <= kUndistortTolerance;
    x = next_x;
    y = next_y;
    if (converged) break;
  }
  return {x, y};
}

Point3 intersect_ground(const Point3& origin, const Vec3& direction,
                        const char* what) {
  if (!(direction.z < 0.0)) {
    throw ProjectionError(std::string(what) +
                          ": ray does not descend toward the ground plane");
  }
  const double t = -origin.z / direction.z;
  if (!(t > 0.0)) {
    throw ProjectionError(std::string(what) +
                          ": ground intersection lies behind the lens");
  }
  Point3 hit = origin + direction * t;
  hit.z = 0.0;
  return hit;
}

}  // namespace

RigidTransform lens_in_world(const ProjectorConfig& cfg,
                             const RigidTransform& robot_pose) {
  return compose(robot_pose, cfg.mount);
}

PixelCoord project_point(const ProjectorConfig& cfg,
                         const RigidTransform& robot_pose,
                         const Point3& p_world) {
  const RigidTransform lens_from_world = invert(lens_in_world(cfg, robot_pose));
  const Point3 p = lens_from_world.apply(p_world);
  if (!(p.z > kMinDepth)) {
    throw ProjectionError("point is at or behind the projector lens plane");
  }
  Normalized n{p.x / p.z, p.y / p.z};
  if (cfg.intrinsics.distortion) {
    n = distort(*cfg.intrinsics.distortion, n.x, n.y);
  }
  const Intrinsics& k = cfg.intrinsics;
  return {k.fx * n.x + k.cx, k.fy * n.y + k.cy};
}

Point3 unproject_to_ground(const ProjectorConfig& cfg,
                           const RigidTransform& robot_pose, PixelCoord pixel) {
  const Intrinsics& k = cfg.intrinsics;
  Normalized n{(pixel.u - k.cx) / k.fx, (pixel.v - k.cy) / k.fy};
  if (cfg.intrinsics.distortion) {
    n = undistort(*cfg.intrinsics.distortion, n.x, n.y);
  }
  const RigidTransform world_from_lens = lens_in_world(cfg, robot_pose);
  const Vec3 direction = world_from_lens.rotate({n.x, n.y, 1.0});
  return intersect_ground(world_from_lens.translation, direction, "unproject");
}

GroundFootprint ground_footprint(const ProjectorConfig& cfg,
                                 const RigidTransform& robot_pose) {
  const double w = static_cast<double>(cfg.intrinsics.width_px);
  const double h = static_cast<double>(cfg.intrinsics.height_px);
  // Image boundary corners; pixel centers sit at integer coordinates, so the
  // image area runs from -0.5 to extent - 0.5.
  const PixelCoord image_corners[4] = {
      {-0.5, -0.5}, {w - 0.5, -0.5}, {w - 0.5, h - 0.5}, {-0.5, h - 0.5}};
  GroundFootprint fp;
  for (int i = 0; i < 4; ++i) {
    try {
      fp.corners[static_cast<std::size_t>(i)] =
          unproject_to_ground(cfg, robot_pose, image_corners[i]);
    } catch (const ProjectionError& e) {
      static const char* names[4] = {"top-left", "top-right", "bottom-right",
                                     "bottom-left"};
      throw ProjectionError(std::string("footprint undefined: ") + names[i] +
                            " corner ray misses the ground (" + e.what() + ")");
    }
  }
  const Point3& tl = fp.corners[0];
  const Point3& tr = fp.corners[1];
  const Point3& br = fp.corners[2];
  const Point3& bl = fp.corners[3];
  fp.far_width_m = planar_distance(tl, tr);
  fp.near_width_m = planar_distance(bl, br);
  const Point3 far_mid = (tl + tr) * 0.5;
  const Point3 near_mid = (bl + br) * 0.5;
  fp.depth_m = planar_distance(far_mid, near_mid);
  const double twice_area = (tl.x * tr.y - tr.x * tl.y) +
                            (tr.x * br.y - br.x * tr.y) +
                            (br.x * bl.y - bl.x * br.y) +
                            (bl.x * tl.y - tl.x * bl.y);
  fp.area_m2 = 0.5 * std::abs(twice_area);
  return fp;
}

ThrowReport validate_throw(const ProjectorConfig& cfg,
                           const RigidTransform& robot_pose) {
  ThrowReport report;
  report.throw_min_m = cfg.throw_min_m;
  report.throw_max_m = cfg.throw_max_m;

  const RigidTransform world_from_lens = lens_in_world(cfg, robot_pose);
  const Vec3 axis = world_from_lens.rotate({0.0, 0.0, 1.0});
  const Point3 origin = world_from_lens.translation;

  char buf[160];
  if (!(axis.z < 0.0) || !(-origin.z / axis.z > 0.0)) {
    report.status = ThrowStatus::Undefined;
    report.message =
        "throw undefined: optical axis does not intersect the ground plane";
    return report;
  }
  report.axis_distance_m = -origin.z / axis.z;
  if (report.axis_distance_m < cfg.throw_min_m) {
    report.status = ThrowStatus::TooClose;
    std::snprintf(buf, sizeof(buf),
                  "throw warning: axis distance %.3f m is below the minimum "
                  "throw %.2f m; projection will be blurred",
                  report.axis_distance_m, cfg.throw_min_m);
  } else if (report.axis_distance_m > cfg.throw_max_m) {
    report.status = ThrowStatus::TooFar;
    std::snprintf(buf, sizeof(buf),
                  "throw warning: axis distance %.3f m is above the maximum "
                  "throw %.2f m; projection will be blurred",
                  report.axis_distance_m, cfg.throw_max_m);
  } else {
    report.status = ThrowStatus::Ok;
    std::snprintf(buf, sizeof(buf),
                  "throw ok: axis distance %.3f m within [%.2f, %.2f] m",
                  report.axis_distance_m, cfg.throw_min_m, cfg.throw_max_m);
  }
  report.message = buf;
  return report;
}

namespace {

double finite_field(const nlohmann::json& doc, const char* field) {
  if (!doc.contains(field)) {
    throw ParseError(std::string("projector config: missing field '") + field +
                     "'");
  }
  if (!doc.at(field).is_number()) {
    throw ParseError(std::string("projector config: field '") + field +
                     "' must be a number");
  }
  const double v = doc.at(field).get<double>();
  if (!std::isfinite(v)) {
    throw ParseError(std::string("projector config: field '") + field +
                     "' must be finite");
  }
  return v;
}

int positive_int_field(const nlohmann::json& doc, const char* field) {
  if (!doc.contains(field) || !doc.at(field).is_number_integer()) {
    throw ParseError(std::string("projector config: field '") + field +
                     "' must be a positive integer");
  }
  const auto v = doc.at(field).get<std::int64_t>();
  if (v <= 0 || v > 1 << 20) {
    throw ParseError(std::string("projector config: field '") + field +
                     "' out of range");
  }
  return static_cast<int>(v);
}

void read_camera_matrix(const nlohmann::json& matrix, Intrinsics& k) {
  if (!matrix.is_array() || matrix.size() != 9) {
    throw ParseError(
        "projector config: 'camera_matrix' must be 9 numbers, row-major");
  }
  double m[9];
  for (std::size_t i = 0; i < 9; ++i) {
    if (!matrix[i].is_number()) {
      throw ParseError("projector config: camera_matrix[" + std::to_string(i) +
                       "] must be a number");
    }
    m[i] = matrix[i].get<double>();
    if (!std::isfinite(m[i])) {
      throw ParseError("projector config: camera_matrix[" + std::to_string(i) +
                       "] must be finite");
    }
  }
  if (m[1] != 0.0) {
    throw ParseError(
        "projector config: camera_matrix[1] (skew) must be 0");
  }
  if (m[3] != 0.0 || m[6] != 0.0 || m[7] != 0.0) {
    throw ParseError(
        "projector config: camera_matrix rows must follow [fx 0 cx; 0 fy cy; "
        "0 0 1]");
  }
  if (m[8] != 1.0) {
    throw ParseError("projector config: camera_matrix[8] must be 1");
  }
  k.fx = m[0];
  k.cx = m[2];
  k.fy = m[4];
  k.cy = m[5];
}

}  // namespace

ProjectorConfig load_projector_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("projector config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("projector config: expected a JSON object");
  }

  ProjectorConfig cfg;
  Intrinsics& k = cfg.intrinsics;
  k.width_px = positive_int_field(doc, "image_width");
  k.height_px = positive_int_field(doc, "image_height");

  const bool has_matrix = doc.contains("camera_matrix");
  const bool has_scalars = doc.contains("fx") || doc.contains("fy") ||
                           doc.contains("cx") || doc.contains("cy");
  if (has_matrix == has_scalars) {
    throw ParseError(
        "projector config: provide exactly one of 'camera_matrix' or "
        "fx/fy/cx/cy");
  }
  if (has_matrix) {
    read_camera_matrix(doc.at("camera_matrix"), k);
  } else {
    k.fx = finite_field(doc, "fx");
    k.fy = finite_field(doc, "fy");
    k.cx = finite_field(doc, "cx");
    k.cy = finite_field(doc, "cy");
  }
  if (!(k.fx > 0.0) || !(k.fy > 0.0)) {
    throw ParseError("projector config: focal lengths fx/fy must be positive");
  }
  if (k.cx < 0.0 || k.cx >= k.width_px) {
    throw ParseError("projector config: 'cx' must lie in [0, image_width)");
  }
  if (k.cy < 0.0 || k.cy >= k.height_px) {
    throw ParseError("projector config: 'cy' must lie in [0, image_height)");
  }

  std::string model = "none";
  if (doc.contains("distortion_model")) {
    if (!doc.at("distortion_model").is_string()) {
      throw ParseError(
          "projector config: 'distortion_model' must be a string");
    }
    model = doc.at("distortion_model").get<std::string>();
  }
  if (model == "none") {
    if (doc.contains("distortion_coefficients")) {
      const auto& coeffs = doc.at("distortion_coefficients");
      if (!coeffs.is_array() || coeffs.size() != 5) {
        throw ParseError(
            "projector config: 'distortion_coefficients' must be 5 numbers");
      }
      for (const auto& c : coeffs) {
        if (!c.is_number() || c.get<double>() != 0.0) {
          throw ParseError(
              "projector config: model 'none' requires all-zero "
              "distortion_coefficients");
        }
      }
    }
  } else if (model == "radtan") {
    if (!doc.contains("distortion_coefficients") ||
        !doc.at("distortion_coefficients").is_array() ||
        doc.at("distortion_coefficients").size() != 5) {
      throw ParseError(
          "projector config: model 'radtan' requires 'distortion_coefficients' "
          "with 5 numbers (k1, k2, p1, p2, k3)");
    }
    const auto& coeffs = doc.at("distortion_coefficients");
    double c[5];
    for (std::size_t i = 0; i < 5; ++i) {
      if (!coeffs[i].is_number() ||
          !std::isfinite(coeffs[i].get<double>())) {
        throw ParseError("projector config: distortion_coefficients[" +
                         std::to_string(i) + "] must be a finite number");
      }
      c[i] = coeffs[i].get<double>();
    }
    k.distortion = RadTanCoeffs{c[0], c[1], c[2], c[3], c[4]};
  } else {
    throw ParseError(
        "projector config: 'distortion_model' must be \"none\" or \"radtan\"");
  }

  cfg.throw_min_m = finite_field(doc, "throw_min_m");
  cfg.throw_max_m = finite_field(doc, "throw_max_m");
  if (!(cfg.throw_min_m > 0.0) || !(cfg.throw_min_m < cfg.throw_max_m)) {
    throw ParseError(
        "projector config: require 0 < throw_min_m < throw_max_m");
  }

  cfg.mount = RigidTransform::identity("base_link", "projector_lens");
  return cfg;
}

std::string serialize_projector_config(const ProjectorConfig& cfg) {
  const Intrinsics& k = cfg.intrinsics;
  nlohmann::json doc;
  doc["image_width"] = k.width_px;
  doc["image_height"] = k.height_px;
  doc["fx"] = k.fx;
  doc["fy"] = k.fy;
  doc["cx"] = k.cx;
  doc["cy"] = k.cy;
  if (k.distortion) {
    doc["distortion_model"] = "radtan";
    doc["distortion_coefficients"] = {k.distortion->k1, k.distortion->k2,
                                      k.distortion->p1, k.distortion->p2,
                                      k.distortion->k3};
  } else {
    doc["distortion_model"] = "none";
  }
  doc["throw_min_m"] = cfg.throw_min_m;
  doc["throw_max_m"] = cfg.throw_max_m;
  return doc.dump(2) + "\n";
}

}  // namespace pathlight
