#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "geocontract/cover.hpp"
#include "geocontract/curves.hpp"
#include "geocontract/nerve.hpp"

namespace geocontract {

/// G + 4 F_A: the width allowance for approximating a curve by the nerve.
double g_sigma(const GoodCoverCertificate& cert);
inline double g_sigma(double F_A, double G) { return G + 4 * F_A; }

/// Element chosen for every point of the flattened loop.
struct Itinerary {
  std::vector<int> element;       // per fine point
  std::vector<double> arc;        // arc position of each fine point
  std::vector<int> sample_point;  // fine index of each loop sample
  SimplicialLoop alpha;
  std::vector<double> visit_arc;  // arc where each alpha vertex is entered
  double length = 0;
};

/// Greedy assignment: keep the current element while it contains the
/// curve, otherwise switch to the containing element whose run ahead is
/// longest. Throws NoItinerary if a point lies in no element.
Itinerary itinerary(const MetricSurface& s, const PolyLoop& loop, const GoodCoverCertificate& cert);

struct ApproximationResult {
  SimplicialLoop alpha;
  DiscreteHomotopy homotopy;  // loop -> realization of alpha
  double width = 0;
  std::vector<int> element_itinerary;  // per sample
};

/// Slides every sample along its connector to the center of its element;
/// the last frame is the realization of alpha.
ApproximationResult approximate(const MetricSurface& s, const PolyLoop& loop,
                                const GoodCoverCertificate& cert, const NerveGraph& nerve);

/// Largest simplicial length over closed back-and-forth geodesics between
/// seeded vertex pairs.
int measure_Z(const MetricSurface& s, const GoodCoverCertificate& cert, int trials, std::uint64_t seed,
              int samples = 64);

struct BreakResult {
  std::vector<PolyLoop> pieces;  // each starts at the common basepoint
  SurfacePoint basepoint;
  DiscreteHomotopy homotopy;     // input -> concatenation of the pieces
  double measured_W = 0;
  double measured_delta = 0;
  int segment_size = 0;          // alpha vertices per piece
  std::vector<double> cut_arcs;
  std::vector<int> piece_m;
};

/// Cuts alpha into runs of floor(X/2) vertices and closes each run with
/// chords through the first cut point. Throws ContractViolation when
/// m <= X and CannotShorten when no split yields pieces with m <= X that
/// are all strictly shorter than the input.
BreakResult break_loop(const MetricSurface& s, const PolyLoop& loop, int X,
                       const GoodCoverCertificate& cert, const NerveGraph& nerve);

/// Same loop listed from another sample and/or in the other direction,
/// applied to every frame.
DiscreteHomotopy reindex_homotopy(const DiscreteHomotopy& h, int shift, bool reverse);

/// g1 -> realization -> g2 for loops with the same canonical
/// approximation. The result ends at g2 up to reindexing. Throws
/// DifferentApproximations.
DiscreteHomotopy same_approx_homotopy(const MetricSurface& s, const PolyLoop& g1, const PolyLoop& g2,
                                      const GoodCoverCertificate& cert, const NerveGraph& nerve,
                                      bool allow_reversal = true);

/// Contracts the concatenation of loops based at one point: each piece in
/// turn runs its contraction while dragging a tail to the basepoint, then
/// retracts along the tail. Throws BasepointMismatch.
DiscreteHomotopy join_contractions(const MetricSurface& s,
                                   const std::vector<std::pair<PolyLoop, DiscreteHomotopy>>& pieces);

}  // namespace geocontract
