#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "geocontract/cover.hpp"
#include "geocontract/path.hpp"

namespace geocontract {

struct NerveEdge {
  int i = 0, j = 0;      // i < j
  SurfacePoint z;        // meeting point in A_i and A_j
  SurfacePath curve;     // x_i -> z -> x_j
  double length = 0;
};

/// One vertex per refinement element, one edge per intersecting pair.
struct NerveGraph {
  std::vector<SurfacePoint> points;  // x_i
  std::vector<int> center_vertex;
  std::vector<NerveEdge> edges;
  std::vector<std::vector<int>> adjacency;  // sorted neighbour ids

  int vertex_count() const { return static_cast<int>(points.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  /// Edge index for {a, b}, or -1.
  int edge_between(int a, int b) const;
  bool adjacent(int a, int b) const { return edge_between(a, b) >= 0; }
  /// Edge curve oriented from x_a to x_b.
  SurfacePath edge_curve(int a, int b) const;

  std::map<std::pair<int, int>, int> index;
};

/// Closed walk in the nerve. A single vertex is the point loop (m = 0);
/// otherwise the walk visits vertices[0], vertices[1], ... and returns.
struct SimplicialLoop {
  std::vector<int> vertices;

  int m() const { return vertices.size() <= 1 ? 0 : static_cast<int>(vertices.size()); }
  bool operator==(const SimplicialLoop&) const = default;
  auto operator<=>(const SimplicialLoop& o) const { return vertices <=> o.vertices; }
};

/// Throws EdgeTooLong when an edge curve exceeds 2 F_A.
NerveGraph build_nerve(const MetricSurface& s, const GoodCoverCertificate& cert);

/// Checks adjacency of consecutive vertices, including the closing pair.
bool is_valid_loop(const NerveGraph& g, const SimplicialLoop& alpha);

/// Lexicographically least rotation, also over the reversed walk when
/// `allow_reversal` is set. Point loops are returned unchanged.
SimplicialLoop canonical_form(const SimplicialLoop& alpha, bool allow_reversal = true);

/// Concatenated edge curves of the walk; the point x_v for a point loop.
SurfacePath realize(const NerveGraph& g, const SimplicialLoop& alpha);

struct LoopCensus {
  std::vector<SimplicialLoop> loops;  // canonical, sorted
  std::uint64_t walks_examined = 0;
  std::size_t count() const { return loops.size(); }
};

/// Every canonical loop with m <= X, point loops included. Throws
/// TooLargeToEnumerate when the number of walks to examine exceeds `cap`.
LoopCensus enumerate_loops(const NerveGraph& g, int X, bool allow_reversal = true,
                           std::uint64_t cap = 10'000'000);

/// Builds a nerve from an explicit adjacency list, with no geometry. Used
/// for counting experiments on small graphs.
NerveGraph abstract_nerve(int vertex_count, const std::vector<std::pair<int, int>>& edges);

}  // namespace geocontract
