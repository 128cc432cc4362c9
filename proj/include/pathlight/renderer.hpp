#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pathlight/marker.hpp"
#include "pathlight/projector.hpp"

namespace pathlight {

/// Row-major RGB image, 8 bits per channel. This is the frame a physical
/// projector would display.
struct Framebuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // size = width * height * 3

  Framebuffer() = default;
  Framebuffer(int w, int h, Rgb fill = {});

  Rgb at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = index(x, y);
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
  }

  bool operator==(const Framebuffer&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) *
           3;
  }
};

/// What to draw: markers in paint order plus the robot's pose in the world
/// (markers are expressed in the world/path frame).
struct Scene {
  std::vector<MarkerSpec> markers;
  RigidTransform robot_pose;  // world -> robot base
  Rgb background{0, 0, 0};
};

/// Even-odd scanline fill. A pixel is painted iff its center (x + 0.5,
/// y + 0.5) is inside; boundary ties follow the top-left rule, so polygons
/// sharing an edge paint every straddled pixel exactly once. Fewer than 3
/// vertices is a no-op. Paint is opaque.
void fill_polygon(Framebuffer& fb, std::span<const PixelCoord> vertices,
                  Rgb color);

/// Fill the background, then project and fill each marker in order. A marker
/// with any vertex at or behind the lens plane is skipped whole rather than
/// clipped. Pure function: identical inputs give bit-identical frames.
Framebuffer render_frame(const Scene& scene, const ProjectorConfig& cfg);

}  // namespace pathlight
