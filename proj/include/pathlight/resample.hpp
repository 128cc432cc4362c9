#pragma once

#include <string>
#include <vector>

#include "pathlight/geometry.hpp"

namespace pathlight {

struct PathPose {
  Point3 position;
  UnitQuaternion orientation;
};

/// Dense planner output. Index 0 is the start, the last pose the
/// destination. May be empty (planner idle).
struct NavPath {
  std::string frame;
  std::vector<PathPose> poses;
};

struct ResampleParams {
  double arrow_spacing_m = 0.5;         // gap D between consecutive anchors
  double destination_diameter_m = 0.3;  // extra clearance before the first arrow
};

enum class AnchorKind { Destination, Arrow };

struct Anchor {
  Point3 position;
  double heading_rad = 0.0;
  AnchorKind kind = AnchorKind::Arrow;
};

/// Destination-first, exactly one destination anchor when non-empty. Every
/// anchor position is a verbatim element of the source path.
using AnchorList = std::vector<Anchor>;

/// Thin a dense path into evenly spaced anchors by walking backward from the
/// destination. The destination pose is always selected first; each further
/// anchor is the first earlier path point whose planar distance from the
/// previous anchor reaches the threshold -- D + destination diameter for the
/// gap next to the destination, D for every later gap (>= comparisons, so a
/// gap of exactly D is accepted). Stops once the scan passes the path start.
/// z coordinates are carried through untouched. Headings are left at zero;
/// see derive_headings. Throws ParamError on non-positive spacing or a
/// negative destination diameter.
AnchorList resample(const NavPath& path, const ResampleParams& params);

/// Point every arrow at its neighbor nearer the destination:
/// anchors[k].heading = atan2 of anchors[k-1] - anchors[k]. The destination
/// inherits the heading of anchors[1], or 0 when it is alone.
AnchorList derive_headings(AnchorList anchors);

}  // namespace pathlight
