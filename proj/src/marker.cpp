#include "pathlight/marker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

namespace pathlight {

double polygon_signed_area(const std::vector<Point3>& vertices) {
  double twice_area = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& a = vertices[i];
    const Point3& b = vertices[(i + 1) % n];
    twice_area += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice_area;
}

namespace {

// Proper crossing or endpoint touch between segments ab and cd, in the plane.
bool segments_intersect(const Point3& a, const Point3& b, const Point3& c,
                        const Point3& d) {
  auto orient = [](const Point3& p, const Point3& q, const Point3& r) {
    const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
  };
  auto on_segment = [](const Point3& p, const Point3& q, const Point3& r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
           std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
  };
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, c, b)) return true;
  if (o2 == 0 && on_segment(a, d, b)) return true;
  if (o3 == 0 && on_segment(c, a, d)) return true;
  if (o4 == 0 && on_segment(c, b, d)) return true;
  return false;
}

Point3 pose_to_ground(const Point3& anchor, double cos_h, double sin_h,
                      double lx, double ly) {
  return {anchor.x + cos_h * lx - sin_h * ly,
          anchor.y + sin_h * lx + cos_h * ly, 0.0};
}

}  // namespace

bool polygon_is_simple(const std::vector<Point3>& vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip adjacent edges (they share a vertex by construction)
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                             vertices[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

GroundPolygon build_arrow(const Point3& anchor, double heading_rad,
                          const ArrowDimensions& dims, Rgb color) {
  if (!(dims.shaft_length_m > 0.0) || !(dims.shaft_diameter_m > 0.0) ||
      !(dims.head_length_m > 0.0) || !(dims.head_diameter_m > 0.0) ||
      !std::isfinite(dims.shaft_length_m + dims.shaft_diameter_m +
                     dims.head_length_m + dims.head_diameter_m)) {
    throw ParamError("arrow dimensions must all be positive and finite");
  }
  if (dims.head_diameter_m < dims.shaft_diameter_m) {
    throw ParamError("arrow head diameter must be >= shaft diameter");
  }
  const double hs = dims.shaft_diameter_m * 0.5;
  const double hh = dims.head_diameter_m * 0.5;
  const double sl = dims.shaft_length_m;
  const double tip = dims.shaft_length_m + dims.head_length_m;
  const double c = std::cos(heading_rad);
  const double s = std::sin(heading_rad);
  GroundPolygon poly;
  poly.color = color;
  poly.vertices = {
      pose_to_ground(anchor, c, s, 0.0, -hs), pose_to_ground(anchor, c, s, sl, -hs),
      pose_to_ground(anchor, c, s, sl, -hh), pose_to_ground(anchor, c, s, tip, 0.0),
      pose_to_ground(anchor, c, s, sl, hh),  pose_to_ground(anchor, c, s, sl, hs),
      pose_to_ground(anchor, c, s, 0.0, hs),
  };
  return poly;
}

GroundPolygon build_disk(const Point3& center, double diameter_m, int segments,
                         Rgb color) {
  if (!(diameter_m > 0.0) || !std::isfinite(diameter_m)) {
    throw ParamError("disk diameter must be positive and finite");
  }
  if (segments < 8) {
    throw ParamError("disk tessellation needs at least 8 segments, got " +
                     std::to_string(segments));
  }
  const double radius = diameter_m * 0.5;
  GroundPolygon poly;
  poly.color = color;
  poly.vertices.reserve(static_cast<std::size_t>(segments));
  for (int k = 0; k < segments; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / segments;
    poly.vertices.push_back({center.x + radius * std::cos(angle),
                             center.y + radius * std::sin(angle), 0.0});
  }
  return poly;
}

ArrowDimensions distance_compensated_scale(const Point3& anchor,
                                           const Point3& lens_position,
                                           const ArrowDimensions& base_dims,
                                           double reference_distance_m) {
  if (!(reference_distance_m > 0.0) || !std::isfinite(reference_distance_m)) {
    throw ParamError("reference distance must be positive and finite");
  }
  const double distance = (anchor - lens_position).norm();
  if (distance < 1e-12) {
    throw ParamError("anchor coincides with the projector lens; scale undefined");
  }
  const double scale = std::clamp(reference_distance_m / distance, 0.25, 1.0);
  return {base_dims.shaft_length_m * scale, base_dims.shaft_diameter_m * scale,
          base_dims.head_length_m * scale, base_dims.head_diameter_m * scale};
}

std::vector<MarkerSpec> markers_for_anchors(const AnchorList& anchors,
                                            const MarkerStyle& style,
                                            double destination_diameter_m,
                                            const Point3& lens_position) {
  std::vector<MarkerSpec> markers;
  markers.reserve(anchors.size());
  for (const Anchor& anchor : anchors) {
    if (anchor.kind == AnchorKind::Destination) {
      if (destination_diameter_m > 0.0) {
        markers.push_back({anchor.position,
                           anchor.heading_rad,
                           style.destination_color,
                           DiskShape{destination_diameter_m,
                                     style.destination_segments}});
      }
      continue;
    }
    ArrowDimensions dims = style.arrow;
    if (style.scale_compensation.enabled) {
      dims = distance_compensated_scale(
          anchor.position, lens_position, style.arrow,
          style.scale_compensation.reference_distance_m);
    }
    markers.push_back({anchor.position, anchor.heading_rad, style.arrow_color,
                       ArrowShape{dims}});
  }
  return markers;
}

std::vector<GroundPolygon> marker_polygons(const MarkerSpec& marker) {
  std::vector<GroundPolygon> polys;
  const double c = std::cos(marker.heading_rad);
  const double s = std::sin(marker.heading_rad);

  if (const auto* arrow = std::get_if<ArrowShape>(&marker.shape)) {
    polys.push_back(build_arrow(marker.position, marker.heading_rad,
                                arrow->dims, marker.color));
  } else if (const auto* disk = std::get_if<DiskShape>(&marker.shape)) {
    polys.push_back(build_disk(marker.position, disk->diameter_m,
                               disk->segments, marker.color));
  } else if (const auto* polygon = std::get_if<PolygonShape>(&marker.shape)) {
    if (polygon->vertices.size() < 3) {
      throw ParamError("polygon marker needs at least 3 vertices");
    }
    GroundPolygon poly;
    poly.color = marker.color;
    for (const Point3& v : polygon->vertices) {
      poly.vertices.push_back(pose_to_ground(marker.position, c, s, v.x, v.y));
    }
    // Normalize winding so downstream consumers can rely on it; keep the
    // first vertex in place so the reversal is a pure orientation flip.
    if (polygon_signed_area(poly.vertices) < 0.0) {
      std::reverse(poly.vertices.begin() + 1, poly.vertices.end());
    }
    polys.push_back(std::move(poly));
  } else if (const auto* line = std::get_if<PolylineShape>(&marker.shape)) {
    if (!(line->width_m > 0.0)) {
      throw ParamError("polyline width must be positive");
    }
    const double half = line->width_m * 0.5;
    for (std::size_t i = 0; i + 1 < line->vertices.size(); ++i) {
      const Point3 a = pose_to_ground(marker.position, c, s,
                                      line->vertices[i].x, line->vertices[i].y);
      const Point3 b = pose_to_ground(marker.position, c, s,
                                      line->vertices[i + 1].x,
                                      line->vertices[i + 1].y);
      const double len = planar_distance(a, b);
      if (len < 1e-12) continue;  // zero-length segment paints nothing
      const double nx = -(b.y - a.y) / len * half;
      const double ny = (b.x - a.x) / len * half;
      GroundPolygon quad;
      quad.color = marker.color;
      quad.vertices = {{a.x - nx, a.y - ny, 0.0},
                       {b.x - nx, b.y - ny, 0.0},
                       {b.x + nx, b.y + ny, 0.0},
                       {a.x + nx, a.y + ny, 0.0}};
      if (polygon_signed_area(quad.vertices) < 0.0) {
        std::reverse(quad.vertices.begin(), quad.vertices.end());
      }
      polys.push_back(std::move(quad));
    }
  }
  return polys;
}

namespace {

Rgb parse_color(const nlohmann::json& value, const std::string& context) {
  if (!value.is_array() || value.size() != 3) {
    throw ParseError(context + ": color must be an [r, g, b] triple");
  }
  Rgb out;
  std::uint8_t* channels[3] = {&out.r, &out.g, &out.b};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!value[i].is_number_integer()) {
      throw ParseError(context + ": color channels must be integers");
    }
    const auto v = value[i].get<std::int64_t>();
    if (v < 0 || v > 255) {
      throw ParseError(context + ": color channels must lie in 0..255");
    }
    *channels[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

double positive_length(const nlohmann::json& section, const std::string& context,
                       const char* field, double fallback) {
  if (!section.contains(field)) return fallback;
  if (!section.at(field).is_number()) {
    throw ParseError(context + ": field '" + std::string(field) +
                     "' must be a number");
  }
  const double v = section.at(field).get<double>();
  if (!std::isfinite(v) || v <= 0.0) {
    throw ParseError(context + ": field '" + std::string(field) +
                     "' must be a positive length in meters");
  }
  return v;
}

}  // namespace

MarkerStyle load_style_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("style config: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("style config: expected a JSON object");
  }

  MarkerStyle style;
  if (doc.contains("arrow")) {
    const auto& arrow = doc.at("arrow");
    style.arrow.shaft_length_m =
        positive_length(arrow, "style arrow", "shaft_length", style.arrow.shaft_length_m);
    style.arrow.shaft_diameter_m =
        positive_length(arrow, "style arrow", "shaft_diameter", style.arrow.shaft_diameter_m);
    style.arrow.head_length_m =
        positive_length(arrow, "style arrow", "head_length", style.arrow.head_length_m);
    style.arrow.head_diameter_m =
        positive_length(arrow, "style arrow", "head_diameter", style.arrow.head_diameter_m);
    if (arrow.contains("color")) {
      style.arrow_color = parse_color(arrow.at("color"), "style arrow");
    }
  }
  if (doc.contains("destination")) {
    const auto& dest = doc.at("destination");
    if (dest.contains("color")) {
      style.destination_color = parse_color(dest.at("color"), "style destination");
    }
    if (dest.contains("segments")) {
      if (!dest.at("segments").is_number_integer()) {
        throw ParseError("style destination: 'segments' must be an integer");
      }
      style.destination_segments = dest.at("segments").get<int>();
      if (style.destination_segments < 8) {
        throw ParseError("style destination: 'segments' must be >= 8");
      }
    }
  }
  if (doc.contains("scale_compensation")) {
    const auto& comp = doc.at("scale_compensation");
    if (comp.contains("enabled")) {
      if (!comp.at("enabled").is_boolean()) {
        throw ParseError("style scale_compensation: 'enabled' must be a boolean");
      }
      style.scale_compensation.enabled = comp.at("enabled").get<bool>();
    }
    style.scale_compensation.reference_distance_m =
        positive_length(comp, "style scale_compensation", "reference_distance_m",
                        style.scale_compensation.reference_distance_m);
  }
  if (doc.contains("background")) {
    style.background = parse_color(doc.at("background"), "style background");
  }
  return style;
}

}  // namespace pathlight
