#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geocontract/curves.hpp"

namespace geocontract {

struct BpflConfig {
  double rho = 0;           // anchor spacing; 0 picks default_rho
  int stall_window = 20;    // full steps
  double stall_tol = 1e-4;  // relative length decrease over the window
  int max_iterations = 2000;
  double max_length = 0;    // 0 means 3 D
  double D = 0;             // 0 means the surface diameter
};

/// Smallest face perimeter: the scale below which edge cycles are local.
double girth_proxy(const MetricSurface& s);

/// min(F_A, girth)/2, raised to 6 D / K so every anchor arc spans at least
/// two samples of a loop of length 3 D. Pass F_A = 0 when no cover exists.
double default_rho(const MetricSurface& s, double F_A, int samples);

/// Two half-steps: arcs between anchors are replaced by geodesics where
/// that is shorter, then the anchors shift by half a stride. Each
/// half-step is resampled to K with the anchor sample kept in place.
/// `frames`, when given, receives one frame per half-step.
PolyLoop bpfl_step(const MetricSurface& s, const PolyLoop& loop, double rho,
                   DiscreteHomotopy* frames = nullptr);

enum class ShorteningStatus { ContractedToPoint, StalledAtGeodesic };
std::string status_name(ShorteningStatus status);

struct ShorteningOutcome {
  ShorteningStatus status = ShorteningStatus::ContractedToPoint;
  DiscreteHomotopy frames;
  std::vector<int> partition;  // frame indices, first 0, last frame_count-1
  std::optional<PolyLoop> candidate;
  std::vector<double> lengths;  // per frame
  int iterations = 0;           // full steps
  double rho = 0;
};

/// Runs bpfl_step until the loop is a point curve or stalls. A contracted
/// run ends with one extra frame collapsing every sample onto sample 0.
/// Throws ContractViolation above max_length and IterationCapExceeded.
ShorteningOutcome bpfl_contract(const MetricSurface& s, const PolyLoop& loop, const BpflConfig& cfg);

/// Greedy blocks of consecutive frames whose width stays <= D. Throws
/// SingleStepTooWide when one transition alone exceeds D.
std::vector<int> partition_by_width(const MetricSurface& s, const DiscreteHomotopy& h, double D);

/// Closed plane section n.x = c; the longest component when several exist.
/// Empty when the plane misses the surface.
std::optional<PolyLoop> plane_section(const MetricSurface& s, const Vec3& normal, double offset, int samples);
/// The section snapped to mesh edges: each crossing moves to its nearer
/// edge end, which turns the section into an edge cycle.
std::optional<PolyLoop> edge_cycle_near_section(const MetricSurface& s, const Vec3& normal, double offset,
                                                int samples);

struct SeedRun {
  std::string kind;
  double initial_length = 0;
  std::optional<ShorteningStatus> status;  // none when the seed was empty or failed
  double final_length = 0;
  int iterations = 0;
};

struct GeodesicSearch {
  std::optional<PolyLoop> candidate;
  double length = 0;
  std::vector<SeedRun> runs;
};

/// Runs `budget` seed loops (coordinate slices and their edge cycles
/// first, then random planes) through bpfl_contract and keeps the
/// shortest stalled candidate. Seeds run concurrently; results do not
/// depend on the thread count.
GeodesicSearch find_shortest_geodesic(const MetricSurface& s, int budget, std::uint64_t seed,
                                      BpflConfig cfg = {}, int samples = 64);

}  // namespace geocontract
