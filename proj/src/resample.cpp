#include "pathlight/resample.hpp"

#include <cmath>
#include <cstddef>

namespace pathlight {

AnchorList resample(const NavPath& path, const ResampleParams& params) {
  if (!std::isfinite(params.arrow_spacing_m) || params.arrow_spacing_m <= 0.0) {
    throw ParamError("arrow spacing must be a positive, finite distance");
  }
  if (!std::isfinite(params.destination_diameter_m) ||
      params.destination_diameter_m < 0.0) {
    throw ParamError("destination diameter must be finite and >= 0");
  }

  AnchorList anchors;
  if (path.poses.empty()) return anchors;

  std::ptrdiff_t current = static_cast<std::ptrdiff_t>(path.poses.size()) - 1;
  anchors.push_back({path.poses[current].position, 0.0, AnchorKind::Destination});

  bool destination_gap = true;
  for (;;) {
    const double threshold =
        destination_gap ? params.arrow_spacing_m + params.destination_diameter_m
                        : params.arrow_spacing_m;
    const Point3& from = path.poses[current].position;
    std::ptrdiff_t scan = current - 1;
    while (scan >= 0 &&
           planar_distance(from, path.poses[scan].position) < threshold) {
      --scan;
    }
    if (scan < 0) break;  // passed the path start without clearing the threshold
    anchors.push_back({path.poses[scan].position, 0.0, AnchorKind::Arrow});
    current = scan;
    destination_gap = false;
  }
  return anchors;
}

AnchorList derive_headings(AnchorList anchors) {
  for (std::size_t k = 1; k < anchors.size(); ++k) {
    const Vec3 toward = anchors[k - 1].position - anchors[k].position;
    anchors[k].heading_rad = std::atan2(toward.y, toward.x);
  }
  if (!anchors.empty()) {
    anchors[0].heading_rad = anchors.size() > 1 ? anchors[1].heading_rad : 0.0;
  }
  return anchors;
}

}  // namespace pathlight
