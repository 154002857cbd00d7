#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "geocontract/curves.hpp"
#include "geocontract/surface.hpp"

namespace geocontract {

enum class ElementKind { Refinement, Cover };

/// Geodesic ball given by its member vertices. A surface point belongs to
/// the element when one of its carrier vertices is a member, so an element
/// is the open star of its member set.
struct CoverElement {
  int center_vertex = -1;
  SurfacePoint center;
  double radius = 0;
  ElementKind kind = ElementKind::Refinement;
  std::vector<int> members;  // sorted

  // Shortest-path tree from the center inside the member subgraph, aligned
  // with `members`. Filled by index_element.
  std::vector<double> center_dist;
  std::vector<int> parent;  // vertex id, -1 at the center
  double eccentricity = 0;

  int member_slot(int v) const;
  bool contains_vertex(int v) const { return member_slot(v) >= 0; }
  bool contains(const MetricSurface& s, const SurfacePoint& p) const;
  bool contains(const MetricSurface& s, const SurfacePath& path) const;
};

/// Builds the in-element tree; throws DisconnectedElement when a member
/// cannot be reached from the center through member vertices.
void index_element(const MetricSurface& s, CoverElement& e);

/// Member path from vertex v to the element center.
SurfacePath path_to_center(const MetricSurface& s, const CoverElement& e, int v);
/// Shortest path from p into the element's member subgraph and on to the
/// center; p must lie in the element.
SurfacePath connector(const MetricSurface& s, const CoverElement& e, const SurfacePoint& p);
/// Shortest path between two members through member vertices.
SurfacePath in_element_path(const MetricSurface& s, const CoverElement& e, int from, int to);

struct GoodCoverCertificate {
  std::vector<CoverElement> refinement;
  std::vector<CoverElement> cover;
  double F_A = 0, F_B = 0, F = 0, G = 0;
  double G_sampled = 0;   // largest contraction width seen in trials
  int G_trials = 0;       // number of sampled loops behind G_sampled
  int pair_trials = 0;    // sampled pairs behind F_A / F_B
  double slack = 0;       // per-endpoint allowance: longest mesh edge
  int N = 0;
  std::uint64_t seed = 0;
  /// (i, j) with i <= j and A_i, A_j intersecting -> k with A_i u A_j in B_k.
  std::map<std::pair<int, int>, int> pairing;
  /// Refinement elements containing each vertex.
  std::vector<std::vector<int>> vertex_refinement;

  bool intersecting(int i, int j) const;
  bool within_preset_constants(double D) const { return F <= 3 * D && G <= 21 * D; }
};

struct BallCover {
  std::vector<CoverElement> refinement;
  std::vector<CoverElement> cover;
};

/// Greedy Poisson-disk centers at spacing r/4 in seeded vertex order;
/// A = ball(c, r/4) and B = ball(c, r). Throws RadiusTooSmall when the
/// element count would exceed `cap`.
BallCover build_ball_cover(const MetricSurface& s, double r, std::uint64_t seed, int cap = 4096);

/// Measures F_A, F_B, G and N and fills the pairing table. Throws
/// NotAGoodCover or DisconnectedElement.
GoodCoverCertificate certify_cover(const MetricSurface& s, std::vector<CoverElement> refinement,
                                   std::vector<CoverElement> cover, int trials, std::uint64_t seed,
                                   int samples = 64);

/// Slides every sample along its connector to the center. Throws
/// LoopEscapesElement when the loop leaves the element.
DiscreteHomotopy contract_in_ball(const MetricSurface& s, const PolyLoop& loop,
                                  const CoverElement& element);

/// Random loop through three members joined by member paths.
PolyLoop random_element_loop(const MetricSurface& s, const CoverElement& e, std::uint64_t seed,
                             int samples);

}  // namespace geocontract
