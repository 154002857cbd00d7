#pragma once

#include <string>
#include <vector>

#include "geocontract/surface.hpp"

namespace geocontract {

struct Overlay {
  std::vector<Vec3> points;
  std::string color = "#d62728";
  double stroke = 2.0;
  bool closed = true;
};

struct RenderOptions {
  int size = 640;
  double azimuth = 0.6;    // radians about z
  double elevation = 0.5;  // radians above the xy plane
  std::string title;
};

/// Orthographic SVG view: faces painted back to front with Lambert
/// shading, then the overlays. Points behind the mesh centre are dimmed.
std::string render_svg(const MetricSurface& s, const std::vector<Overlay>& overlays,
                       const RenderOptions& opt = {});

}  // namespace geocontract
