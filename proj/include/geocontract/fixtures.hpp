#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geocontract/surface.hpp"

namespace geocontract::fixtures {

/// Regular tetrahedron with unit edges.
MetricSurface tetrahedron();
/// Unit-radius icosphere after `subdivisions` rounds of 4:1 splitting.
MetricSurface icosphere(int subdivisions);
/// Icosphere scaled to the given semi-axes.
MetricSurface ellipsoid(double a, double b, double c, int subdivisions);
/// Two lobes along x joined by a narrow waist.
MetricSurface dumbbell(int subdivisions);
/// Squashed, asymmetric sphere with a few smooth bumps.
MetricSurface bumpy_cap(int subdivisions);

/// "tetrahedron", "icosphere2".."icosphere5", "ellipsoid", "dumbbell",
/// "bumpy_cap". Throws Error{ConfigError} for unknown names.
MetricSurface by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace geocontract::fixtures
