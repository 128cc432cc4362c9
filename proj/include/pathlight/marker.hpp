#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "pathlight/geometry.hpp"
#include "pathlight/resample.hpp"

namespace pathlight {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

/// Arrow shape parameters; the defaults keep the head and shaft the same
/// length so short arrows stay legible on the ground.
struct ArrowDimensions {
  double shaft_length_m = 0.2;
  double shaft_diameter_m = 0.1;
  double head_length_m = 0.2;
  double head_diameter_m = 0.2;
};

struct ArrowShape {
  ArrowDimensions dims;
};

struct DiskShape {
  double diameter_m = 0.3;
  int segments = 64;
};

struct PolygonShape {
  std::vector<Point3> vertices;  // marker-local ground coordinates
};

struct PolylineShape {
  std::vector<Point3> vertices;  // marker-local ground coordinates
  double width_m = 0.05;
};

/// A flat marker on the ground plane, posed by anchor position + heading.
struct MarkerSpec {
  Point3 position;
  double heading_rad = 0.0;
  Rgb color;
  std::variant<ArrowShape, DiskShape, PolygonShape, PolylineShape> shape;
};

/// Filled polygon on z = 0 with counterclockwise winding.
struct GroundPolygon {
  std::vector<Point3> vertices;
  Rgb color;
};

/// Shoelace area over (x, y); positive for counterclockwise winding.
double polygon_signed_area(const std::vector<Point3>& vertices);

/// True when no two non-adjacent edges intersect. O(n^2); intended for
/// validation and tests, not the render loop.
bool polygon_is_simple(const std::vector<Point3>& vertices);

/// 7-vertex arrow: shaft rectangle with its tail at the anchor, then an
/// isoceles head triangle, all rotated by heading about the anchor. Throws
/// ParamError for non-positive dimensions or a head narrower than the shaft.
GroundPolygon build_arrow(const Point3& anchor, double heading_rad,
                          const ArrowDimensions& dims, Rgb color);

/// Regular N-gon inscribed in the circle, counterclockwise. Throws
/// ParamError for a non-positive diameter or fewer than 8 segments.
GroundPolygon build_disk(const Point3& center, double diameter_m, int segments,
                         Rgb color);

/// Shrink arrow dimensions proportionally to the anchor's distance from the
/// projector lens: all four dimensions scale by
/// reference_distance_m / |anchor - lens|, clamped to [0.25, 1.0]. Throws
/// ParamError for a non-positive reference distance or zero lens distance.
ArrowDimensions distance_compensated_scale(const Point3& anchor,
                                           const Point3& lens_position,
                                           const ArrowDimensions& base_dims,
                                           double reference_distance_m);

struct ScaleCompensation {
  bool enabled = false;
  double reference_distance_m = 1.0;
};

struct MarkerStyle {
  ArrowDimensions arrow;
  Rgb arrow_color{128, 0, 128};
  Rgb destination_color{0, 160, 0};
  int destination_segments = 64;
  ScaleCompensation scale_compensation;
  Rgb background{0, 0, 0};
};

/// One marker per anchor, destination-first: the destination anchor becomes
/// a disk of the given diameter (omitted when the diameter is zero), every
/// other anchor an arrow with its heading. lens_position is consulted only
/// when scale compensation is enabled.
std::vector<MarkerSpec> markers_for_anchors(const AnchorList& anchors,
                                            const MarkerStyle& style,
                                            double destination_diameter_m,
                                            const Point3& lens_position = {});

/// Ground polygons realizing one marker. Arrows, disks, and polygons yield
/// one polygon; polylines one quad per segment. Shape-local vertices are
/// rotated by heading and translated to the marker position; output z is 0.
std::vector<GroundPolygon> marker_polygons(const MarkerSpec& marker);

/// Style config: JSON object with optional sections
///   {"arrow": {shaft_length, shaft_diameter, head_length, head_diameter,
///              color}, "destination": {color, segments},
///    "scale_compensation": {enabled, reference_distance_m},
///    "background": [r, g, b]}
/// Lengths in meters, colors 0-255 triples. Missing sections keep defaults.
MarkerStyle load_style_config(std::string_view text);

}  // namespace pathlight
