#pragma once

#include <vector>

#include "geocontract/surface.hpp"

namespace geocontract {

/// Polyline on the surface. Consecutive points always share a closed face,
/// so each straight piece lies on the surface and its Euclidean length is
/// its intrinsic length.
struct SurfacePath {
  std::vector<SurfacePoint> points;

  bool empty() const { return points.empty(); }
  const SurfacePoint& front() const { return points.front(); }
  const SurfacePoint& back() const { return points.back(); }
};

double path_length(const MetricSurface& s, const SurfacePath& path);
SurfacePath reversed(SurfacePath path);
/// Appends `tail` to `head`; the junction point is kept once.
void append_path(SurfacePath& head, const SurfacePath& tail);
SurfacePath constant_path(const SurfacePoint& p);
/// Point at arc length `at` (clamped to the path).
SurfacePoint point_at(const MetricSurface& s, const SurfacePath& path, double at);
/// Sub-polyline between arc lengths `from` <= `to`.
SurfacePath subpath(const MetricSurface& s, const SurfacePath& path, double from, double to);

}  // namespace geocontract
