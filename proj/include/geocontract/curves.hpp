#pragma once

#include <optional>
#include <vector>

#include "geocontract/path.hpp"
#include "geocontract/surface.hpp"

namespace geocontract {

/// Closed curve sampled at K points; segments[i] joins samples[i] to
/// samples[(i+1) % K].
struct PolyLoop {
  std::vector<SurfacePoint> samples;
  std::vector<SurfacePath> segments;
  int basepoint = 0;

  int size() const { return static_cast<int>(samples.size()); }
};

/// Loop through `samples` joined by geodesics.
PolyLoop make_loop(const MetricSurface& s, std::vector<SurfacePoint> samples);
/// Loop along a closed polyline (front == back), resampled to k samples.
PolyLoop loop_from_path(const MetricSurface& s, const SurfacePath& closed, int k);
/// Loop whose samples all sit at p.
PolyLoop point_loop(const SurfacePoint& p, int k);
double loop_length(const MetricSurface& s, const PolyLoop& loop);
bool is_point_curve(const MetricSurface& s, const PolyLoop& loop);
/// Whole loop as one closed polyline starting and ending at samples[0].
SurfacePath flatten(const PolyLoop& loop);
/// Arc-length positions of every sample along flatten(loop).
std::vector<double> sample_offsets(const MetricSurface& s, const PolyLoop& loop);
/// Arc-length resampling to k samples, the first at arc position `origin`.
/// The image is unchanged and the segments are sub-arcs of the old loop.
PolyLoop resample(const MetricSurface& s, const PolyLoop& loop, int k, double origin = 0.0);
/// Forward sub-arc of the closed polyline `flat` (total length L) from arc
/// position `start` spanning `span`, wrapping past the end.
SurfacePath closed_arc(const MetricSurface& s, const SurfacePath& flat, double L, double start,
                       double span);
/// Same loop listed from sample `shift`.
PolyLoop cyclic_shift(const PolyLoop& loop, int shift);
PolyLoop reversed_loop(const PolyLoop& loop);
/// Checks the segment endpoint invariant (within `tol` model units).
bool loop_is_consistent(const MetricSurface& s, const PolyLoop& loop, double tol = 1e-9);

/// Frames with identical sample count plus, per transition, the surface path
/// every sample travels. The width is the longest total trajectory.
struct DiscreteHomotopy {
  std::vector<PolyLoop> frames;
  std::vector<std::vector<SurfacePath>> moves;  // moves[t][j]: frame t -> t+1

  int frame_count() const { return static_cast<int>(frames.size()); }
  int sample_count() const { return frames.empty() ? 0 : frames.front().size(); }
  const PolyLoop& source() const { return frames.front(); }
  const PolyLoop& target() const { return frames.back(); }
};

DiscreteHomotopy constant_homotopy(const PolyLoop& loop);
/// Appends a frame. Missing moves are filled with geodesics between the
/// corresponding samples. Throws FrameMismatch on a sample-count change.
void append_frame(const MetricSurface& s, DiscreteHomotopy& h, PolyLoop frame,
                  std::optional<std::vector<SurfacePath>> moves = std::nullopt);
std::vector<double> trajectory_lengths(const MetricSurface& s, const DiscreteHomotopy& h);
double homotopy_width(const MetricSurface& s, const DiscreteHomotopy& h);
/// Trajectory of sample j as one path.
SurfacePath trajectory(const DiscreteHomotopy& h, int j);
/// Frames of h1 then h2; the seam frames must agree sample-wise.
DiscreteHomotopy concat_homotopies(const MetricSurface& s, const DiscreteHomotopy& h1,
                                   const DiscreteHomotopy& h2);
DiscreteHomotopy reverse_homotopy(const DiscreteHomotopy& h);
/// Frames between [first, last] inclusive.
DiscreteHomotopy slice_homotopy(const DiscreteHomotopy& h, int first, int last);

/// Slides every sample along the loop by arc length s0, taking the shorter
/// direction; width is min(s0, L - s0).
DiscreteHomotopy rotate_loop_homotopy(const MetricSurface& s, const PolyLoop& loop, double shift);

}  // namespace geocontract
