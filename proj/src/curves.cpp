#include "geocontract/curves.hpp"

#include <algorithm>
#include <cmath>

#include "geocontract/errors.hpp"
#include "geocontract/geodesic.hpp"

namespace geocontract {

double path_length(const MetricSurface& s, const SurfacePath& path) {
  double total = 0;
  for (std::size_t i = 1; i < path.points.size(); ++i)
    total += distance(s.position(path.points[i - 1]), s.position(path.points[i]));
  return total;
}

SurfacePath reversed(SurfacePath path) {
  std::reverse(path.points.begin(), path.points.end());
  return path;
}

void append_path(SurfacePath& head, const SurfacePath& tail) {
  if (tail.points.empty()) return;
  if (head.points.empty()) {
    head = tail;
    return;
  }
  head.points.insert(head.points.end(), tail.points.begin() + 1, tail.points.end());
}

SurfacePath constant_path(const SurfacePoint& p) { return {{p, p}}; }

SurfacePoint point_at(const MetricSurface& s, const SurfacePath& path, double at) {
  if (path.points.size() == 1 || at <= 0) return path.points.front();
  double walked = 0;
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    double piece = distance(s.position(path.points[i - 1]), s.position(path.points[i]));
    if (walked + piece >= at && piece > 0)
      return s.interpolate(path.points[i - 1], path.points[i], (at - walked) / piece);
    walked += piece;
  }
  return path.points.back();
}

SurfacePath subpath(const MetricSurface& s, const SurfacePath& path, double from, double to) {
  SurfacePath out;
  out.points.push_back(point_at(s, path, from));
  double walked = 0;
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    walked += distance(s.position(path.points[i - 1]), s.position(path.points[i]));
    if (walked > from && walked < to) out.points.push_back(path.points[i]);
  }
  out.points.push_back(point_at(s, path, to));
  return out;
}

SurfacePath closed_arc(const MetricSurface& s, const SurfacePath& flat, double L, double start,
                       double span) {
  start = std::fmod(start, L);
  if (start < 0) start += L;
  double end = start + span;
  if (end <= L + 1e-15 * L) return subpath(s, flat, start, std::min(end, L));
  SurfacePath out = subpath(s, flat, start, L);
  append_path(out, subpath(s, flat, 0.0, end - L));
  return out;
}

PolyLoop make_loop(const MetricSurface& s, std::vector<SurfacePoint> samples) {
  PolyLoop loop;
  const int k = static_cast<int>(samples.size());
  loop.segments.reserve(k);
  for (int i = 0; i < k; ++i) loop.segments.push_back(geodesic(s, samples[i], samples[(i + 1) % k]));
  loop.samples = std::move(samples);
  return loop;
}

PolyLoop loop_from_path(const MetricSurface& s, const SurfacePath& closed, int k) {
  PolyLoop raw;
  const auto& pts = closed.points;
  if (pts.size() < 2) return point_loop(pts.front(), k);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    raw.samples.push_back(pts[i]);
    raw.segments.push_back({{pts[i], pts[i + 1]}});
  }
  raw.segments.back().points.back() = raw.samples.front();
  return resample(s, raw, k);
}

PolyLoop point_loop(const SurfacePoint& p, int k) {
  PolyLoop loop;
  loop.samples.assign(k, p);
  loop.segments.assign(k, constant_path(p));
  return loop;
}

double loop_length(const MetricSurface& s, const PolyLoop& loop) {
  double total = 0;
  for (const auto& seg : loop.segments) total += path_length(s, seg);
  return total;
}

bool is_point_curve(const MetricSurface& s, const PolyLoop& loop) {
  return loop_length(s, loop) <= s.point_tolerance();
}

SurfacePath flatten(const PolyLoop& loop) {
  SurfacePath out;
  for (const auto& seg : loop.segments) append_path(out, seg);
  return out;
}

std::vector<double> sample_offsets(const MetricSurface& s, const PolyLoop& loop) {
  std::vector<double> out(loop.size(), 0.0);
  for (int i = 1; i < loop.size(); ++i) out[i] = out[i - 1] + path_length(s, loop.segments[i - 1]);
  return out;
}

PolyLoop resample(const MetricSurface& s, const PolyLoop& loop, int k, double origin) {
  const double L = loop_length(s, loop);
  if (L <= 0) {
    PolyLoop out = point_loop(loop.samples.front(), k);
    return out;
  }
  SurfacePath flat = flatten(loop);
  PolyLoop out;
  out.samples.reserve(k);
  out.segments.reserve(k);
  const double step = L / k;
  for (int j = 0; j < k; ++j) out.segments.push_back(closed_arc(s, flat, L, origin + j * step, step));
  for (int j = 0; j < k; ++j) out.samples.push_back(out.segments[j].front());
  // Close exactly: segment j ends where segment j+1 starts.
  for (int j = 0; j < k; ++j) out.segments[j].points.back() = out.samples[(j + 1) % k];
  return out;
}

PolyLoop cyclic_shift(const PolyLoop& loop, int shift) {
  const int k = loop.size();
  shift = ((shift % k) + k) % k;
  PolyLoop out;
  out.samples.reserve(k);
  out.segments.reserve(k);
  for (int i = 0; i < k; ++i) {
    out.samples.push_back(loop.samples[(i + shift) % k]);
    out.segments.push_back(loop.segments[(i + shift) % k]);
  }
  out.basepoint = ((loop.basepoint - shift) % k + k) % k;
  return out;
}

PolyLoop reversed_loop(const PolyLoop& loop) {
  const int k = loop.size();
  PolyLoop out;
  out.samples.reserve(k);
  out.segments.reserve(k);
  for (int i = 0; i < k; ++i) out.samples.push_back(loop.samples[(k - i) % k]);
  for (int i = 0; i < k; ++i) out.segments.push_back(reversed(loop.segments[(2 * k - i - 1) % k]));
  out.basepoint = (k - loop.basepoint) % k;
  return out;
}

bool loop_is_consistent(const MetricSurface& s, const PolyLoop& loop, double tol) {
  const int k = loop.size();
  if (k < 1 || static_cast<int>(loop.segments.size()) != k) return false;
  for (int i = 0; i < k; ++i) {
    const auto& seg = loop.segments[i];
    if (seg.points.empty()) return false;
    if (distance(s.position(seg.front()), s.position(loop.samples[i])) > tol) return false;
    if (distance(s.position(seg.back()), s.position(loop.samples[(i + 1) % k])) > tol) return false;
  }
  return true;
}

DiscreteHomotopy constant_homotopy(const PolyLoop& loop) {
  DiscreteHomotopy h;
  h.frames.push_back(loop);
  return h;
}

void append_frame(const MetricSurface& s, DiscreteHomotopy& h, PolyLoop frame,
                  std::optional<std::vector<SurfacePath>> moves) {
  if (h.frames.empty()) {
    h.frames.push_back(std::move(frame));
    return;
  }
  const int k = h.sample_count();
  if (frame.size() != k) throw Error(ErrorCode::FrameMismatch, "frame sample count differs");
  std::vector<SurfacePath> step;
  if (moves) {
    if (static_cast<int>(moves->size()) != k) throw Error(ErrorCode::FrameMismatch, "move count differs");
    step = std::move(*moves);
  } else {
    const PolyLoop& prev = h.frames.back();
    step.reserve(k);
    for (int j = 0; j < k; ++j) step.push_back(geodesic(s, prev.samples[j], frame.samples[j]));
  }
  h.moves.push_back(std::move(step));
  h.frames.push_back(std::move(frame));
}

std::vector<double> trajectory_lengths(const MetricSurface& s, const DiscreteHomotopy& h) {
  std::vector<double> out(h.sample_count(), 0.0);
  for (const auto& step : h.moves)
    for (std::size_t j = 0; j < step.size(); ++j) out[j] += path_length(s, step[j]);
  return out;
}

double homotopy_width(const MetricSurface& s, const DiscreteHomotopy& h) {
  auto lengths = trajectory_lengths(s, h);
  return lengths.empty() ? 0.0 : *std::max_element(lengths.begin(), lengths.end());
}

SurfacePath trajectory(const DiscreteHomotopy& h, int j) {
  SurfacePath out = constant_path(h.frames.front().samples[j]);
  for (const auto& step : h.moves) append_path(out, step[j]);
  return out;
}

DiscreteHomotopy concat_homotopies(const MetricSurface& s, const DiscreteHomotopy& h1,
                                   const DiscreteHomotopy& h2) {
  if (h1.frames.empty()) return h2;
  if (h2.frames.empty()) return h1;
  const PolyLoop& a = h1.target();
  const PolyLoop& b = h2.source();
  if (a.size() != b.size()) throw Error(ErrorCode::FrameMismatch, "seam frames have different K");
  const double tol = 1e-9 * s.length_scale();
  for (int j = 0; j < a.size(); ++j)
    if (distance(s.position(a.samples[j]), s.position(b.samples[j])) > tol)
      throw Error(ErrorCode::FrameMismatch, "seam frames differ at sample " + std::to_string(j));
  DiscreteHomotopy out = h1;
  out.frames.insert(out.frames.end(), h2.frames.begin() + 1, h2.frames.end());
  out.moves.insert(out.moves.end(), h2.moves.begin(), h2.moves.end());
  return out;
}

DiscreteHomotopy reverse_homotopy(const DiscreteHomotopy& h) {
  DiscreteHomotopy out;
  out.frames.assign(h.frames.rbegin(), h.frames.rend());
  for (auto it = h.moves.rbegin(); it != h.moves.rend(); ++it) {
    std::vector<SurfacePath> step;
    step.reserve(it->size());
    for (const auto& p : *it) step.push_back(reversed(p));
    out.moves.push_back(std::move(step));
  }
  return out;
}

DiscreteHomotopy slice_homotopy(const DiscreteHomotopy& h, int first, int last) {
  DiscreteHomotopy out;
  out.frames.assign(h.frames.begin() + first, h.frames.begin() + last + 1);
  out.moves.assign(h.moves.begin() + first, h.moves.begin() + last);
  return out;
}

DiscreteHomotopy rotate_loop_homotopy(const MetricSurface& s, const PolyLoop& loop, double shift) {
  DiscreteHomotopy h = constant_homotopy(loop);
  const double L = loop_length(s, loop);
  if (L <= 0) return h;
  shift = std::fmod(shift, L);
  if (shift < 0) shift += L;
  const bool forward = shift <= 0.5 * L;
  const double amount = forward ? shift : L - shift;
  if (amount <= 0) return h;

  const int k = loop.size();
  const SurfacePath flat = flatten(loop);
  const auto offsets = sample_offsets(s, loop);
  std::vector<double> gaps(k);
  for (int j = 0; j < k; ++j) gaps[j] = path_length(s, loop.segments[j]);

  const int steps = std::max(1, static_cast<int>(std::ceil(amount / (L / k))));
  const double delta = amount / steps;
  for (int i = 1; i <= steps; ++i) {
    const double moved = (forward ? 1.0 : -1.0) * amount * i / steps;
    PolyLoop frame;
    frame.basepoint = loop.basepoint;
    for (int j = 0; j < k; ++j) frame.segments.push_back(closed_arc(s, flat, L, offsets[j] + moved, gaps[j]));
    for (int j = 0; j < k; ++j) frame.samples.push_back(frame.segments[j].front());
    for (int j = 0; j < k; ++j) frame.segments[j].points.back() = frame.samples[(j + 1) % k];
    std::vector<SurfacePath> step;
    step.reserve(k);
    const double prior = (forward ? 1.0 : -1.0) * amount * (i - 1) / steps;
    for (int j = 0; j < k; ++j) {
      if (forward) {
        step.push_back(closed_arc(s, flat, L, offsets[j] + prior, delta));
      } else {
        step.push_back(reversed(closed_arc(s, flat, L, offsets[j] + moved, delta)));
      }
      step.back().points.front() = h.frames.back().samples[j];
      step.back().points.back() = frame.samples[j];
    }
    h.moves.push_back(std::move(step));
    h.frames.push_back(std::move(frame));
  }
  return h;
}

}  // namespace geocontract
