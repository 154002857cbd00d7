#pragma once

#include <cstdint>
#include <vector>

#include "geocontract/path.hpp"
#include "geocontract/surface.hpp"

namespace geocontract {

/// Mesh vertices plus `subdivisions` evenly spaced points per edge, joined
/// by straight segments across every face. Shortest paths in this graph
/// approximate surface geodesics.
struct SteinerGraph {
  int subdivisions = 0;
  int vertex_count = 0;
  std::vector<Vec3> positions;
  std::vector<int> edge_of;  // -1 for mesh vertices
  std::vector<double> t_of;  // parameter along edge_of
  std::vector<int> offsets;
  std::vector<int> targets;
  std::vector<double> weights;

  SteinerGraph(const MetricSurface& s, int subdivisions);

  int node_count() const { return static_cast<int>(positions.size()); }
  int steiner_node(int edge, int i) const { return vertex_count + edge * subdivisions + i; }
  /// Nodes on the boundary of face f (corners plus edge points).
  void face_nodes(const MetricSurface& s, int f, std::vector<int>& out) const;
  SurfacePoint node_point(const MetricSurface& s, int node) const;
};

/// Approximate shortest path from p to q at the surface's epsilon: A* on
/// the Steiner graph, then iterative straightening of edge crossings.
/// Queries are symmetric: geodesic(q, p) is the exact reverse of
/// geodesic(p, q). Thread-safe.
SurfacePath geodesic(const MetricSurface& s, const SurfacePoint& p, const SurfacePoint& q);
SurfacePath geodesic(const MetricSurface& s, const SurfacePoint& p, const SurfacePoint& q,
                     double epsilon);
double geodesic_distance(const MetricSurface& s, const SurfacePoint& p, const SurfacePoint& q);

/// Single-source graph distances from vertex `source` to every mesh vertex,
/// optionally truncated at `radius` (unreached vertices get +inf).
std::vector<double> vertex_distances(const MetricSurface& s, int source,
                                     double radius = -1.0);

/// Sampled lower bound on the diameter: eccentricities of `sample_count`
/// seeded vertices (all vertices when sample_count >= V). Stores the result
/// on the surface.
double estimate_diameter(MetricSurface& s, int sample_count, std::uint64_t seed);

}  // namespace geocontract
