#pragma once

#include <string>
#include <string_view>

#include "geocontract/surface.hpp"

namespace geocontract {

enum class MeshFormat { Off, Obj };

/// Parses OFF or OBJ (v/f records only) text. Polygonal faces are fanned
/// into triangles. Throws Error{ParseError} or Error{TopologyError}.
MetricSurface load_surface(std::string_view text, MeshFormat format);
/// Picks the format from the extension (".off" / ".obj").
MetricSurface load_surface_file(const std::string& path);

std::string to_off(const MetricSurface& s);
std::string to_obj(const MetricSurface& s);

}  // namespace geocontract
