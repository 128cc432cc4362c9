#include "pathlight/marker.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

using namespace pathlight;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool near_point(const Point3& a, const Point3& b, double tol = 1e-12) {
  return (a - b).norm() <= tol;
}

}  // namespace

TEST_CASE("arrow at heading zero matches the analytic vertex list") {
  // shaft 0.2 x 0.1, head 0.2 long and 0.2 wide: tail-left outline walked
  // counterclockwise starting at the shaft's lower-left corner.
  const GroundPolygon arrow =
      build_arrow({0, 0, 0}, 0.0, {0.2, 0.1, 0.2, 0.2}, {128, 0, 128});
  REQUIRE(arrow.vertices.size() == 7);
  const Point3 expect[7] = {
      {0.0, -0.05, 0}, {0.2, -0.05, 0}, {0.2, -0.1, 0}, {0.4, 0.0, 0},
      {0.2, 0.1, 0},   {0.2, 0.05, 0},  {0.0, 0.05, 0}};
  for (int i = 0; i < 7; ++i) {
    CAPTURE(i);
    CHECK(arrow.vertices[i].x == doctest::Approx(expect[i].x).epsilon(1e-15));
    CHECK(arrow.vertices[i].y == doctest::Approx(expect[i].y).epsilon(1e-15));
    CHECK(arrow.vertices[i].z == 0.0);
  }
  CHECK(arrow.color == Rgb{128, 0, 128});

  // Area = shaft 0.2*0.1 + head triangle 0.5*0.2*0.2 = 0.04, CCW positive.
  CHECK(polygon_signed_area(arrow.vertices) == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(polygon_is_simple(arrow.vertices));
}

TEST_CASE("arrow rotation and translation follow the anchor pose") {
  const ArrowDimensions dims{0.2, 0.1, 0.2, 0.2};
  const Point3 anchor{3.0, -1.0, 0.0};

  SUBCASE("quarter turn maps (x, y) to (-y, x)") {
    const GroundPolygon base = build_arrow({0, 0, 0}, 0.0, dims, {});
    const GroundPolygon turned = build_arrow(anchor, kPi / 2, dims, {});
    for (std::size_t i = 0; i < base.vertices.size(); ++i) {
      const Point3& v = base.vertices[i];
      const Point3 want{anchor.x - v.y, anchor.y + v.x, 0.0};
      CHECK(near_point(turned.vertices[i], want));
    }
  }

  SUBCASE("tip sits one arrow length ahead for any heading") {
    for (const double heading : {0.0, 0.7, kPi / 2, -2.4, kPi}) {
      const GroundPolygon arrow = build_arrow(anchor, heading, dims, {});
      const double len = dims.shaft_length_m + dims.head_length_m;
      const Point3 tip{anchor.x + len * std::cos(heading),
                       anchor.y + len * std::sin(heading), 0.0};
      CHECK(near_point(arrow.vertices[3], tip));
    }
  }

  SUBCASE("rotation preserves area and simplicity") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int i = 0; i < 100; ++i) {
      const GroundPolygon arrow = build_arrow(anchor, angle(rng), dims, {});
      CHECK(polygon_signed_area(arrow.vertices) ==
            doctest::Approx(0.04).epsilon(1e-12));
      CHECK(polygon_is_simple(arrow.vertices));
    }
  }
}

TEST_CASE("arrow dimension validation") {
  CHECK_THROWS_AS(build_arrow({}, 0, {0, 0.1, 0.2, 0.2}, {}), ParamError);
  CHECK_THROWS_AS(build_arrow({}, 0, {0.2, -0.1, 0.2, 0.2}, {}), ParamError);
  CHECK_THROWS_AS(build_arrow({}, 0, {0.2, 0.1, 0.2, NAN}, {}), ParamError);
  // Head narrower than the shaft would self-intersect.
  CHECK_THROWS_AS(build_arrow({}, 0, {0.2, 0.3, 0.2, 0.2}, {}), ParamError);
  CHECK_NOTHROW(build_arrow({}, 0, {0.2, 0.2, 0.2, 0.2}, {}));
}

TEST_CASE("disk is a regular n-gon with every vertex on the circle") {
  const Point3 center{1.0, 2.0, 0.0};
  const GroundPolygon disk = build_disk(center, 0.3, 64, {0, 160, 0});
  REQUIRE(disk.vertices.size() == 64);
  for (const Point3& v : disk.vertices) {
    CHECK(std::abs((v - center).norm() - 0.15) < 1e-12);
    CHECK(v.z == 0.0);
  }
  // N-gon area: n/2 * r^2 * sin(2 pi / n), counterclockwise.
  const double want = 32.0 * 0.15 * 0.15 * std::sin(2 * kPi / 64);
  CHECK(polygon_signed_area(disk.vertices) == doctest::Approx(want).epsilon(1e-12));
  CHECK(polygon_is_simple(disk.vertices));

  CHECK_THROWS_AS(build_disk(center, 0.0, 64, {}), ParamError);
  CHECK_THROWS_AS(build_disk(center, -0.3, 64, {}), ParamError);
  // Too-coarse tessellation is rejected rather than drawn badly.
  CHECK_THROWS_AS(build_disk(center, 0.3, 4, {}), ParamError);
  CHECK_THROWS_AS(build_disk(center, 0.3, 7, {}), ParamError);
  CHECK_NOTHROW(build_disk(center, 0.3, 8, {}));
}

TEST_CASE("distance compensation scales all dimensions and clamps") {
  const ArrowDimensions base{0.2, 0.1, 0.2, 0.2};
  const Point3 lens{0, 0, 1.5};

  // Anchor at reference distance: unscaled.
  const ArrowDimensions at_ref =
      distance_compensated_scale({0, 0, 0}, {0, 0, 2}, base, 2.0);
  CHECK(at_ref.shaft_length_m == doctest::Approx(0.2).epsilon(1e-15));

  // Twice the reference distance: halved.
  const ArrowDimensions far =
      distance_compensated_scale({4, 0, 1.5}, lens, base, 2.0);
  CHECK(far.shaft_length_m == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(far.shaft_diameter_m == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(far.head_length_m == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(far.head_diameter_m == doctest::Approx(0.1).epsilon(1e-12));

  // Lower clamp at 0.25x, upper at 1.0x.
  const ArrowDimensions very_far =
      distance_compensated_scale({100, 0, 1.5}, lens, base, 2.0);
  CHECK(very_far.shaft_length_m == doctest::Approx(0.05).epsilon(1e-12));
  const ArrowDimensions very_near =
      distance_compensated_scale({0.01, 0, 1.5}, lens, base, 2.0);
  CHECK(very_near.shaft_length_m == doctest::Approx(0.2).epsilon(1e-15));

  CHECK_THROWS_AS(distance_compensated_scale({1, 0, 0}, lens, base, 0.0),
                  ParamError);
  CHECK_THROWS_AS(distance_compensated_scale(lens, lens, base, 1.0),
                  ParamError);
}

TEST_CASE("markers_for_anchors maps anchor kinds to shapes") {
  AnchorList anchors;
  anchors.push_back({{2.0, 0.0, 0.0}, 0.0, AnchorKind::Destination});
  anchors.push_back({{1.5, 0.0, 0.0}, 0.0, AnchorKind::Arrow});
  anchors.push_back({{1.0, 0.5, 0.0}, kPi / 4, AnchorKind::Arrow});

  MarkerStyle style;
  const std::vector<MarkerSpec> markers = markers_for_anchors(anchors, style, 0.3);
  REQUIRE(markers.size() == 3);

  CHECK(std::holds_alternative<DiskShape>(markers[0].shape));
  CHECK(std::get<DiskShape>(markers[0].shape).diameter_m == 0.3);
  CHECK(markers[0].color == style.destination_color);

  CHECK(std::holds_alternative<ArrowShape>(markers[1].shape));
  CHECK(markers[1].color == style.arrow_color);
  CHECK(markers[2].heading_rad == doctest::Approx(kPi / 4));

  // Zero circle diameter: no destination disk, arrows unchanged.
  const std::vector<MarkerSpec> bare = markers_for_anchors(anchors, style, 0.0);
  REQUIRE(bare.size() == 2);
  CHECK(std::holds_alternative<ArrowShape>(bare[0].shape));

  // Scale compensation shrinks the farther arrow when enabled.
  style.scale_compensation.enabled = true;
  style.scale_compensation.reference_distance_m = 1.0;
  const Point3 lens{0, 0, 1.25};
  const std::vector<MarkerSpec> scaled =
      markers_for_anchors(anchors, style, 0.3, lens);
  const auto& near_arrow = std::get<ArrowShape>(scaled[2].shape);
  const auto& far_arrow = std::get<ArrowShape>(scaled[1].shape);
  CHECK(far_arrow.dims.shaft_length_m < near_arrow.dims.shaft_length_m);
  CHECK(far_arrow.dims.shaft_length_m >= 0.25 * style.arrow.shaft_length_m);
}

TEST_CASE("marker_polygons realizes every shape on the ground plane") {
  SUBCASE("arrow and disk produce one polygon each") {
    MarkerSpec arrow{{1, 1, 0}, 0.3, {128, 0, 128}, ArrowShape{}};
    const auto arrow_polys = marker_polygons(arrow);
    REQUIRE(arrow_polys.size() == 1);
    CHECK(arrow_polys[0].vertices.size() == 7);
    CHECK(arrow_polys[0].color == Rgb{128, 0, 128});

    MarkerSpec disk{{0, 0, 0}, 0.0, {0, 160, 0}, DiskShape{0.3, 16}};
    const auto disk_polys = marker_polygons(disk);
    REQUIRE(disk_polys.size() == 1);
    CHECK(disk_polys[0].vertices.size() == 16);
  }

  SUBCASE("custom polygon is posed and forced counterclockwise") {
    // Clockwise square input; output must be counterclockwise.
    PolygonShape square;
    square.vertices = {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}};
    MarkerSpec spec{{5, 5, 0}, 0.0, {10, 20, 30}, square};
    const auto polys = marker_polygons(spec);
    REQUIRE(polys.size() == 1);
    CHECK(polygon_signed_area(polys[0].vertices) == doctest::Approx(1.0));
    CHECK(polys[0].vertices[0].x == doctest::Approx(5.0));
  }

  SUBCASE("polyline becomes one quad per segment, zero-length skipped") {
    PolylineShape line;
    line.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    line.width_m = 0.1;
    MarkerSpec spec{{0, 0, 0}, 0.0, {}, line};
    const auto polys = marker_polygons(spec);
    REQUIRE(polys.size() == 2);  // middle segment has zero length
    for (const auto& p : polys) {
      CHECK(p.vertices.size() == 4);
      CHECK(polygon_signed_area(p.vertices) == doctest::Approx(0.1));
    }
  }
}

TEST_CASE("style config overrides defaults and validates") {
  const MarkerStyle fallback = load_style_config("{}");
  CHECK(fallback.arrow_color == Rgb{128, 0, 128});
  CHECK(fallback.destination_color == Rgb{0, 160, 0});
  CHECK(fallback.destination_segments == 64);
  CHECK_FALSE(fallback.scale_compensation.enabled);

  const char* text = R"({
    "arrow": {"shaft_length": 0.3, "shaft_diameter": 0.12,
              "head_length": 0.25, "head_diameter": 0.24,
              "color": [200, 10, 200]},
    "destination": {"color": [0, 255, 0], "segments": 32},
    "scale_compensation": {"enabled": true, "reference_distance_m": 1.5},
    "background": [5, 5, 5]
  })";
  const MarkerStyle style = load_style_config(text);
  CHECK(style.arrow.shaft_length_m == 0.3);
  CHECK(style.arrow.head_diameter_m == 0.24);
  CHECK(style.arrow_color == Rgb{200, 10, 200});
  CHECK(style.destination_color == Rgb{0, 255, 0});
  CHECK(style.destination_segments == 32);
  CHECK(style.scale_compensation.enabled);
  CHECK(style.scale_compensation.reference_distance_m == 1.5);
  CHECK(style.background == Rgb{5, 5, 5});

  CHECK_THROWS_AS(load_style_config("nope"), ParseError);
  CHECK_THROWS_AS(load_style_config(R"({"background": [0, 0]})"), ParseError);
  CHECK_THROWS_AS(load_style_config(R"({"background": [0, 0, 300]})"), ParseError);
  CHECK_THROWS_AS(load_style_config(R"({"arrow": {"shaft_length": -1}})"),
                  ParseError);
  CHECK_THROWS_AS(load_style_config(R"({"destination": {"segments": 4}})"),
                  ParseError);
}
