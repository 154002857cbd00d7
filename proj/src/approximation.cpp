#include "geocontract/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "geocontract/errors.hpp"
#include "geocontract/geodesic.hpp"

namespace geocontract {

double g_sigma(const GoodCoverCertificate& cert) { return g_sigma(cert.F_A, cert.G); }

namespace {

bool in_element(const MetricSurface& s, const GoodCoverCertificate& cert, int elem, const SurfacePoint& p) {
  return cert.refinement[elem].contains(s, p);
}

void append_candidates(const MetricSurface& s, const GoodCoverCertificate& cert, const SurfacePoint& p,
                       std::vector<int>& out) {
  out.clear();
  for (int v : s.carriers(p))
    for (int e : cert.vertex_refinement[v]) out.push_back(e);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

// Path from x_a to x_b through the nerve walk given by `elems`.
SurfacePath walk_curve(const NerveGraph& nerve, const std::vector<int>& elems) {
  std::vector<int> w;
  for (int e : elems)
    if (w.empty() || w.back() != e) w.push_back(e);
  if (w.size() == 1) return constant_path(nerve.points[w.front()]);
  SurfacePath out;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) append_path(out, nerve.edge_curve(w[i], w[i + 1]));
  return out;
}

double length_limit(const MetricSurface& s) {
  return s.diameter() ? 3 * *s.diameter() * (1 + 1e-9) + s.point_tolerance()
                      : std::numeric_limits<double>::infinity();
}

}  // namespace

Itinerary itinerary(const MetricSurface& s, const PolyLoop& loop, const GoodCoverCertificate& cert) {
  Itinerary it;
  std::vector<SurfacePoint> fine;
  for (int j = 0; j < loop.size(); ++j) {
    it.sample_point.push_back(static_cast<int>(fine.size()));
    const auto& seg = loop.segments[j].points;
    for (std::size_t q = 0; q + 1 < seg.size(); ++q) fine.push_back(seg[q]);
    if (seg.size() == 1) fine.push_back(seg[0]);
  }
  const int n = static_cast<int>(fine.size());
  it.arc.resize(n);
  for (int t = 1; t < n; ++t) it.arc[t] = it.arc[t - 1] + distance(s.position(fine[t - 1]), s.position(fine[t]));
  it.length = n > 0 ? it.arc[n - 1] + distance(s.position(fine[n - 1]), s.position(fine[0])) : 0;

  auto run = [&](int elem, int from) {
    int len = 0;
    while (from + len < n && in_element(s, cert, elem, fine[from + len])) ++len;
    return len;
  };
  std::vector<int> cands;
  it.element.resize(n);
  int current = -1;
  for (int t = 0; t < n; ++t) {
    if (current >= 0 && in_element(s, cert, current, fine[t])) {
      it.element[t] = current;
      continue;
    }
    append_candidates(s, cert, fine[t], cands);
    if (cands.empty())
      throw Error(ErrorCode::NoItinerary, "curve point " + std::to_string(t) + " lies in no refinement element");
    int best = -1, best_run = -1;
    for (int c : cands) {
      int r = run(c, t);
      if (r > best_run) {
        best_run = r;
        best = c;
      }
    }
    current = best;
    it.element[t] = current;
  }

  struct Visit {
    int elem;
    double arc;
  };
  std::vector<Visit> visits;
  for (int t = 0; t < n; ++t)
    if (visits.empty() || visits.back().elem != it.element[t]) visits.push_back({it.element[t], it.arc[t]});
  if (visits.size() > 1 && visits.back().elem == visits.front().elem) {
    visits.front().arc = visits.back().arc;
    visits.pop_back();
  }
  for (const auto& v : visits) {
    it.alpha.vertices.push_back(v.elem);
    it.visit_arc.push_back(v.arc);
  }
  if (visits.size() == 1) it.visit_arc = {0.0};
  return it;
}

ApproximationResult approximate(const MetricSurface& s, const PolyLoop& loop,
                                const GoodCoverCertificate& cert, const NerveGraph& nerve) {
  Itinerary it = itinerary(s, loop, cert);
  ApproximationResult out;
  out.alpha = it.alpha;
  const int k = loop.size();
  const int n = static_cast<int>(it.element.size());
  for (int j = 0; j < k; ++j) out.element_itinerary.push_back(it.element[it.sample_point[j]]);

  std::vector<SurfacePath> rails;
  std::vector<double> lengths;
  double longest = 0;
  for (int j = 0; j < k; ++j) {
    rails.push_back(connector(s, cert.refinement[out.element_itinerary[j]], loop.samples[j]));
    lengths.push_back(path_length(s, rails.back()));
    longest = std::max(longest, lengths.back());
  }

  PolyLoop last;
  last.basepoint = loop.basepoint;
  for (int j = 0; j < k; ++j) last.samples.push_back(nerve.points[out.element_itinerary[j]]);
  for (int j = 0; j < k; ++j) {
    std::vector<int> elems;
    int from = it.sample_point[j];
    int to = j + 1 < k ? it.sample_point[j + 1] : n;
    for (int t = from; t <= to; ++t) elems.push_back(it.element[t % n]);
    last.segments.push_back(walk_curve(nerve, elems));
  }

  DiscreteHomotopy h = constant_homotopy(loop);
  const double stride = std::max(cert.F_A, s.max_edge_length()) / 2;
  const int steps = longest > 0 ? std::clamp(static_cast<int>(std::ceil(longest / stride)), 1, 4) : 1;
  for (int i = 1; i <= steps; ++i) {
    const double a = double(i - 1) / steps, b = double(i) / steps;
    std::vector<SurfacePath> moves;
    std::vector<SurfacePoint> pts;
    for (int j = 0; j < k; ++j) {
      SurfacePath m = subpath(s, rails[j], a * lengths[j], b * lengths[j]);
      m.points.front() = h.frames.back().samples[j];
      if (i == steps) m.points.back() = last.samples[j];
      pts.push_back(m.points.back());
      moves.push_back(std::move(m));
    }
    PolyLoop frame;
    if (i == steps) {
      frame = last;
    } else {
      frame = make_loop(s, std::move(pts));
      frame.basepoint = loop.basepoint;
    }
    append_frame(s, h, std::move(frame), std::move(moves));
  }
  out.homotopy = std::move(h);
  out.width = homotopy_width(s, out.homotopy);
  return out;
}

int measure_Z(const MetricSurface& s, const GoodCoverCertificate& cert, int trials, std::uint64_t seed,
              int samples) {
  std::mt19937_64 rng(seed);
  int Z = 0;
  for (int t = 0; t < trials; ++t) {
    int a = static_cast<int>(rng() % s.vertex_count());
    int b = static_cast<int>(rng() % s.vertex_count());
    SurfacePath there = geodesic(s, s.vertex_point(a), s.vertex_point(b));
    SurfacePath closed = there;
    append_path(closed, reversed(there));
    PolyLoop loop = loop_from_path(s, closed, samples);
    Z = std::max(Z, itinerary(s, loop, cert).alpha.m());
  }
  return Z;
}

BreakResult break_loop(const MetricSurface& s, const PolyLoop& loop, int X,
                       const GoodCoverCertificate& cert, const NerveGraph& nerve) {
  (void)nerve;
  Itinerary it = itinerary(s, loop, cert);
  const int m = it.alpha.m();
  if (m <= X)
    throw Error(ErrorCode::ContractViolation,
                "break needs m > X (m = " + std::to_string(m) + ", X = " + std::to_string(X) + ")");
  const int K = loop.size();
  const SurfacePath flat = flatten(loop);
  const double L = loop_length(s, loop);
  const double base = it.visit_arc[0];
  std::vector<double> rel(m);
  for (int i = 0; i < m; ++i) {
    double u = std::fmod(it.visit_arc[i] - base, L);
    rel[i] = u < 0 ? u + L : u;
  }
  auto at_arc = [&](double a) {
    double u = std::fmod(a, L);
    if (u < 0) u += L;
    return point_at(s, flat, u);
  };

  std::string reason;
  for (int seg = std::max(1, X / 2); seg >= 1; --seg) {
    const int k = (m + seg - 1) / seg;
    std::vector<double> cuts;
    for (int i = 0; i < k; ++i) cuts.push_back(rel[i * seg]);
    const SurfacePoint ps = at_arc(base);
    std::vector<SurfacePath> chords(k + 1);
    chords[0] = constant_path(ps);
    chords[k] = constant_path(ps);
    for (int i = 1; i < k; ++i) chords[i] = geodesic(s, ps, at_arc(base + cuts[i]));

    BreakResult out;
    out.basepoint = ps;
    out.segment_size = seg;
    out.measured_delta = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      double from = cuts[i], to = i + 1 < k ? cuts[i + 1] : L;
      SurfacePath path = chords[i];
      append_path(path, closed_arc(s, flat, L, base + from, to - from));
      append_path(path, reversed(chords[i + 1]));
      path.points.front() = ps;
      path.points.back() = ps;
      PolyLoop piece = loop_from_path(s, path, K);
      double len = loop_length(s, piece);
      int pm = itinerary(s, piece, cert).alpha.m();
      out.measured_delta = std::min(out.measured_delta, L - len);
      out.piece_m.push_back(pm);
      out.pieces.push_back(std::move(piece));
      if (pm > X) {
        ok = false;
        reason = "piece " + std::to_string(i) + " still has m = " + std::to_string(pm);
      }
    }
    if (!ok) continue;
    if (!(out.measured_delta > 0)) {
      reason = "a piece is not shorter than the loop (delta = " + std::to_string(out.measured_delta) + ")";
      continue;
    }
    for (double c : cuts) out.cut_arcs.push_back(std::fmod(base + c, L));

    // Frame 0 lists the loop from the first cut with the original samples
    // and, at every later cut, a junction, a spike tip and a second junction.
    struct Mark {
      double arc;
      int spike;  // index of the chord for spike tips, -1 otherwise
    };
    std::vector<Mark> marks;
    const auto offsets = sample_offsets(s, loop);
    marks.push_back({0.0, -1});
    for (int j = 0; j < K; ++j) {
      double u = std::fmod(offsets[j] - base, L);
      if (u < 0) u += L;
      if (u > 0) marks.push_back({u, -1});
    }
    for (int i = 1; i < k; ++i) {
      marks.push_back({cuts[i], -2});
      marks.push_back({cuts[i], i});
      marks.push_back({cuts[i], -3});
    }
    // Stable order: junction, tip, junction at equal arc; plain samples first.
    auto rank = [](const Mark& mk) { return mk.spike == -1 ? 0 : mk.spike == -2 ? 1 : mk.spike >= 0 ? 2 : 3; };
    std::stable_sort(marks.begin(), marks.end(), [&](const Mark& a, const Mark& b) {
      return a.arc < b.arc || (a.arc == b.arc && rank(a) < rank(b));
    });
    const int Kp = static_cast<int>(marks.size());
    double longest = 0;
    for (int i = 1; i < k; ++i) longest = std::max(longest, path_length(s, chords[i]));
    const int steps = longest > 0 ? std::clamp(static_cast<int>(std::ceil(longest / std::max(cert.F_A, 1e-12))), 1, 8) : 1;

    auto frame_at = [&](double lambda) {
      PolyLoop f;
      f.basepoint = 0;
      std::vector<SurfacePath> spike(k);
      for (int i = 1; i < k; ++i) {
        SurfacePath back = reversed(chords[i]);
        spike[i] = subpath(s, back, 0, lambda * path_length(s, back));
      }
      for (int q = 0; q < Kp; ++q) {
        const Mark& mk = marks[q];
        f.samples.push_back(mk.spike >= 0 ? spike[mk.spike].back() : at_arc(base + mk.arc));
      }
      for (int q = 0; q < Kp; ++q) {
        const Mark& a = marks[q];
        const Mark& b = marks[(q + 1) % Kp];
        SurfacePath seg_path;
        if (b.spike >= 0) seg_path = spike[b.spike];
        else if (a.spike >= 0) seg_path = reversed(spike[a.spike]);
        else {
          double span = q + 1 < Kp ? b.arc - a.arc : L - a.arc;
          seg_path = span > 0 ? closed_arc(s, flat, L, base + a.arc, span) : constant_path(f.samples[q]);
        }
        seg_path.points.front() = f.samples[q];
        seg_path.points.back() = f.samples[(q + 1) % Kp];
        f.segments.push_back(std::move(seg_path));
      }
      return f;
    };
    DiscreteHomotopy h = constant_homotopy(frame_at(0.0));
    for (int st = 1; st <= steps; ++st) {
      const double a = double(st - 1) / steps, b = double(st) / steps;
      PolyLoop f = frame_at(b);
      std::vector<SurfacePath> moves;
      for (int q = 0; q < Kp; ++q) {
        const Mark& mk = marks[q];
        if (mk.spike >= 0) {
          SurfacePath back = reversed(chords[mk.spike]);
          double len = path_length(s, back);
          SurfacePath mv = subpath(s, back, a * len, b * len);
          mv.points.front() = h.frames.back().samples[q];
          mv.points.back() = f.samples[q];
          moves.push_back(std::move(mv));
        } else {
          moves.push_back(constant_path(f.samples[q]));
        }
      }
      append_frame(s, h, std::move(f), std::move(moves));
    }
    out.measured_W = homotopy_width(s, h);
    out.homotopy = std::move(h);
    return out;
  }
  throw Error(ErrorCode::CannotShorten, "break failed: " + reason);
}

DiscreteHomotopy reindex_homotopy(const DiscreteHomotopy& h, int shift, bool reverse) {
  const int K = h.sample_count();
  auto source = [&](int i) { return reverse ? (((K - i) % K) + shift) % K : (i + shift) % K; };
  DiscreteHomotopy out;
  for (const auto& f : h.frames) {
    PolyLoop g = cyclic_shift(f, shift);
    out.frames.push_back(reverse ? reversed_loop(g) : g);
  }
  for (const auto& step : h.moves) {
    std::vector<SurfacePath> mv(K);
    for (int i = 0; i < K; ++i) mv[i] = step[source(i)];
    out.moves.push_back(std::move(mv));
  }
  return out;
}

DiscreteHomotopy same_approx_homotopy(const MetricSurface& s, const PolyLoop& g1, const PolyLoop& g2,
                                      const GoodCoverCertificate& cert, const NerveGraph& nerve,
                                      bool allow_reversal) {
  const double limit = length_limit(s);
  if (loop_length(s, g1) > limit || loop_length(s, g2) > limit)
    throw Error(ErrorCode::ContractViolation, "same-approximation homotopy needs loops of length <= 3 D");
  if (g1.size() != g2.size()) throw Error(ErrorCode::FrameMismatch, "loops have different sample counts");
  ApproximationResult r1 = approximate(s, g1, cert, nerve);
  ApproximationResult r2 = approximate(s, g2, cert, nerve);
  if (canonical_form(r1.alpha, allow_reversal) != canonical_form(r2.alpha, allow_reversal))
    throw Error(ErrorCode::DifferentApproximations, "loops have different canonical approximations");

  const PolyLoop& F1 = r1.homotopy.target();
  const PolyLoop& F2 = r2.homotopy.target();
  const int K = F1.size();
  std::vector<Vec3> p1, p2;
  for (const auto& p : F1.samples) p1.push_back(s.position(p));
  for (const auto& p : F2.samples) p2.push_back(s.position(p));
  double best = std::numeric_limits<double>::infinity();
  int best_shift = 0;
  bool best_rev = false;
  for (int rev = 0; rev <= (allow_reversal ? 1 : 0); ++rev)
    for (int shift = 0; shift < K; ++shift) {
      double worst = 0;
      for (int i = 0; i < K && worst < best; ++i) {
        int src = rev ? (((K - i) % K) + shift) % K : (i + shift) % K;
        worst = std::max(worst, distance(p1[i], p2[src]));
      }
      if (worst < best) {
        best = worst;
        best_shift = shift;
        best_rev = rev;
      }
    }
  DiscreteHomotopy h2 = reindex_homotopy(r2.homotopy, best_shift, best_rev);
  const PolyLoop& dest = h2.target();

  std::vector<SurfacePath> rails;
  double longest = 0;
  for (int j = 0; j < K; ++j) {
    rails.push_back(geodesic(s, F1.samples[j], dest.samples[j]));
    longest = std::max(longest, path_length(s, rails.back()));
  }
  DiscreteHomotopy slide = constant_homotopy(F1);
  const double stride = std::max(cert.F_A, s.max_edge_length()) / 2;
  const int steps = longest > 0 ? std::clamp(static_cast<int>(std::ceil(longest / stride)), 1, 8) : 0;
  for (int i = 1; i <= steps; ++i) {
    const double a = double(i - 1) / steps, b = double(i) / steps;
    std::vector<SurfacePath> moves;
    std::vector<SurfacePoint> pts;
    for (int j = 0; j < K; ++j) {
      double len = path_length(s, rails[j]);
      SurfacePath mv = subpath(s, rails[j], a * len, b * len);
      mv.points.front() = slide.frames.back().samples[j];
      if (i == steps) mv.points.back() = dest.samples[j];
      pts.push_back(mv.points.back());
      moves.push_back(std::move(mv));
    }
    PolyLoop frame = i == steps ? dest : make_loop(s, std::move(pts));
    append_frame(s, slide, std::move(frame), std::move(moves));
  }
  DiscreteHomotopy out = concat_homotopies(s, r1.homotopy, slide);
  return concat_homotopies(s, out, reverse_homotopy(h2));
}

DiscreteHomotopy join_contractions(const MetricSurface& s,
                                   const std::vector<std::pair<PolyLoop, DiscreteHomotopy>>& pieces) {
  if (pieces.empty()) throw Error(ErrorCode::ContractViolation, "nothing to join");
  const double tol = 1e-9 * s.length_scale();
  const int n = static_cast<int>(pieces.size());
  const PolyLoop& first = pieces.front().first;
  const SurfacePoint p = first.samples[first.basepoint];
  const Vec3 px = s.position(p);

  // Every block listed from its basepoint.
  std::vector<DiscreteHomotopy> H;
  for (const auto& [loop, h] : pieces) {
    if (distance(s.position(loop.samples[loop.basepoint]), px) > tol)
      throw Error(ErrorCode::BasepointMismatch, "pieces do not share a basepoint");
    if (h.frames.empty() || h.sample_count() != loop.size())
      throw Error(ErrorCode::FrameMismatch, "contraction does not match its piece");
    for (int j = 0; j < loop.size(); ++j)
      if (distance(s.position(h.source().samples[j]), s.position(loop.samples[j])) > tol)
        throw Error(ErrorCode::FrameMismatch, "contraction does not start at its piece");
    const PolyLoop& end = h.target();
    for (const auto& q : end.samples)
      if (distance(s.position(q), s.position(end.samples[0])) > s.point_tolerance())
        throw Error(ErrorCode::ContractViolation, "piece contraction does not end at a point");
    H.push_back(reindex_homotopy(h, loop.basepoint, false));
  }

  std::vector<PolyLoop> state;
  std::vector<SurfacePath> tails(n, constant_path(p));
  for (const auto& h : H) state.push_back(h.source());

  auto compose = [&]() {
    PolyLoop f;
    for (int b = 0; b < n; ++b) {
      const PolyLoop& blk = state[b];
      const int K = blk.size();
      for (int i = 0; i < K; ++i) {
        f.samples.push_back(blk.samples[i]);
        SurfacePath seg = blk.segments[i];
        if (i == K - 1) {
          seg.points.back() = blk.samples[0];
          append_path(seg, reversed(tails[b]));
          append_path(seg, tails[(b + 1) % n]);
        }
        f.segments.push_back(std::move(seg));
      }
    }
    const int total = f.size();
    for (int q = 0; q < total; ++q) {
      f.segments[q].points.front() = f.samples[q];
      f.segments[q].points.back() = f.samples[(q + 1) % total];
    }
    return f;
  };
  auto still = [&](int skip, std::vector<SurfacePath>& moves, const std::vector<SurfacePath>& active) {
    moves.clear();
    for (int b = 0; b < n; ++b) {
      if (b == skip) {
        moves.insert(moves.end(), active.begin(), active.end());
      } else {
        for (const auto& q : state[b].samples) moves.push_back(constant_path(q));
      }
    }
  };

  DiscreteHomotopy out = constant_homotopy(compose());
  std::vector<SurfacePath> moves;
  for (int b = 0; b < n; ++b) {
    const DiscreteHomotopy& h = H[b];
    for (int t = 1; t < h.frame_count(); ++t) {
      append_path(tails[b], h.moves[t - 1][0]);
      state[b] = h.frames[t];
      still(b, moves, h.moves[t - 1]);
      append_frame(s, out, compose(), moves);
    }
    // Retract the collapsed block along its tail.
    const SurfacePath back = reversed(tails[b]);
    const double tail_len = path_length(s, back);
    if (tail_len <= 0 && state[b].samples == std::vector<SurfacePoint>(state[b].size(), p)) {
      tails[b] = constant_path(p);
      continue;
    }
    const PolyLoop collapsed = state[b];
    std::vector<SurfacePath> rails;
    for (const auto& q : collapsed.samples) {
      SurfacePath r = distance(s.position(q), s.position(collapsed.samples[0])) > 0
                          ? geodesic(s, q, collapsed.samples[0])
                          : constant_path(q);
      append_path(r, back);
      rails.push_back(std::move(r));
    }
    const double stride = std::max(s.max_edge_length(), s.length_scale() / 16);
    const int steps = std::clamp(static_cast<int>(std::ceil(tail_len / stride)), 1, 8);
    const int K = collapsed.size();
    for (int st = 1; st <= steps; ++st) {
      const double a = double(st - 1) / steps, c = double(st) / steps;
      std::vector<SurfacePath> active;
      std::vector<SurfacePoint> pts;
      for (int j = 0; j < K; ++j) {
        double len = path_length(s, rails[j]);
        SurfacePath mv = subpath(s, rails[j], a * len, c * len);
        mv.points.front() = state[b].samples[j];
        if (st == steps) mv.points.back() = p;
        pts.push_back(mv.points.back());
        active.push_back(std::move(mv));
      }
      tails[b] = st == steps ? constant_path(p) : subpath(s, tails[b], 0, (1 - c) * tail_len);
      if (st == steps) {
        state[b] = point_loop(p, K);
      } else {
        PolyLoop blk;
        blk.samples = pts;
        for (int j = 0; j < K; ++j) {
          bool same = distance(s.position(pts[j]), s.position(pts[(j + 1) % K])) == 0;
          blk.segments.push_back(same ? constant_path(pts[j]) : geodesic(s, pts[j], pts[(j + 1) % K]));
        }
        state[b] = std::move(blk);
      }
      still(b, moves, active);
      append_frame(s, out, compose(), moves);
    }
  }
  return out;
}

}  // namespace geocontract
