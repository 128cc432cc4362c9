#include "pathlight/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pathlight/errors.hpp"

namespace pathlight {

Framebuffer::Framebuffer(int w, int h, Rgb fill) : width(w), height(h) {
  if (w <= 0 || h <= 0)
    throw ParamError("framebuffer dimensions must be positive");
  pixels.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  for (std::size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = fill.r;
    pixels[i + 1] = fill.g;
    pixels[i + 2] = fill.b;
  }
}

namespace {

// One polygon edge crossing of a scanline, kept as the exact x at the pixel
//-center row so ties between abutting polygons resolve identically.
struct Crossing {
  double x;
};

}  // namespace

void fill_polygon(Framebuffer& fb, std::span<const PixelCoord> vertices,
                  Rgb color) {
  const std::size_t n = vertices.size();
  if (n < 3) return;

  double vmin = vertices[0].v, vmax = vertices[0].v;
  for (const PixelCoord& p : vertices) {
    vmin = std::min(vmin, p.v);
    vmax = std::max(vmax, p.v);
  }
  // Pixel row y has its center at y + 0.5.
  int y_begin = static_cast<int>(std::ceil(vmin - 0.5));
  int y_end = static_cast<int>(std::floor(vmax - 0.5)) + 1;
  y_begin = std::max(y_begin, 0);
  y_end = std::min(y_end, fb.height);

  std::vector<double> xs;
  for (int y = y_begin; y < y_end; ++y) {
    const double yc = y + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const PixelCoord& a = vertices[i];
      const PixelCoord& b = vertices[(i + 1) % n];
      if (a.v == b.v) continue;  // horizontal edges never cross a scanline
      // Half-open span [min, max) so a vertex shared by two edges counts once.
      const double lo = std::min(a.v, b.v);
      const double hi = std::max(a.v, b.v);
      if (yc < lo || yc >= hi) continue;
      xs.push_back(a.u + (yc - a.v) * (b.u - a.u) / (b.v - a.v));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      // Paint pixels whose center falls in [xa, xb): half-open keeps shared
      // vertical edges from double-painting. Clamp before the int cast --
      // projected coordinates can overflow int when a vertex passes near the
      // lens plane.
      const double xa = std::max(xs[i], 0.0);
      const double xb = std::min(xs[i + 1], static_cast<double>(fb.width));
      if (xa >= xb) continue;
      const int x_begin = static_cast<int>(std::ceil(xa - 0.5));
      const int x_end = static_cast<int>(std::ceil(xb - 0.5));
      for (int x = std::max(x_begin, 0); x < std::min(x_end, fb.width); ++x)
        fb.set(x, y, color);
    }
  }
}

Framebuffer render_frame(const Scene& scene, const ProjectorConfig& cfg) {
  Framebuffer fb(cfg.intrinsics.width_px, cfg.intrinsics.height_px,
                 scene.background);

  std::vector<PixelCoord> projected;
  for (const MarkerSpec& marker : scene.markers) {
    for (const GroundPolygon& poly : marker_polygons(marker)) {
      projected.clear();
      projected.reserve(poly.vertices.size());
      bool visible = true;
      for (const Point3& v : poly.vertices) {
        try {
          projected.push_back(project_point(cfg, scene.robot_pose, v));
        } catch (const ProjectionError&) {
          // Behind the lens plane: perspective projection is meaningless for
          // this vertex, so drop the whole polygon instead of clipping.
          visible = false;
          break;
        }
      }
      if (visible) fill_polygon(fb, projected, poly.color);
    }
  }
  return fb;
}

}  // namespace pathlight
