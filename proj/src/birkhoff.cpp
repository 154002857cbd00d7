#include "geocontract/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "geocontract/errors.hpp"
#include "geocontract/geodesic.hpp"
#include "geocontract/parallel.hpp"

namespace geocontract {

std::string status_name(ShorteningStatus status) {
  return status == ShorteningStatus::ContractedToPoint ? "ContractedToPoint" : "StalledAtGeodesic";
}

double girth_proxy(const MetricSurface& s) {
  double best = std::numeric_limits<double>::infinity();
  for (int f = 0; f < s.face_count(); ++f) {
    double p = 0;
    for (int e : s.face_edges(f)) p += s.edge_length(e);
    best = std::min(best, p);
  }
  return best;
}

double default_rho(const MetricSurface& s, double F_A, int samples) {
  const double g = girth_proxy(s);
  const double base = (F_A > 0 ? std::min(F_A, g) : g) / 2;
  const double D = s.diameter() ? *s.diameter() : s.length_scale();
  return std::max(base, 6 * D / std::max(samples, 1));
}

namespace {

SurfacePath short_path(const MetricSurface& s, const SurfacePoint& a, const SurfacePoint& b) {
  if (s.position(a) == s.position(b)) return constant_path(a);
  if (s.common_face(a, b) >= 0) return SurfacePath{{a, b}};
  return geodesic(s, a, b);
}

PolyLoop half_step(const MetricSurface& s, const PolyLoop& loop, int stride, int offset) {
  const int K = loop.size();
  const double tiny = 1e-12 * s.length_scale();
  std::vector<int> anchors;
  for (int a = offset; a < offset + K; a += stride) anchors.push_back(a % K);
  SurfacePath closed;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const int from = anchors[i];
    const int to = anchors[(i + 1) % anchors.size()];
    SurfacePath arc;
    int j = from;
    do {
      append_path(arc, loop.segments[j]);
      j = (j + 1) % K;
    } while (j != to);
    const double arc_len = path_length(s, arc);
    SurfacePath g = geodesic(s, loop.samples[from], loop.samples[to]);
    SurfacePath& use = path_length(s, g) < arc_len - tiny ? g : arc;
    use.points.front() = loop.samples[from];
    use.points.back() = loop.samples[to];
    append_path(closed, use);
  }
  if (path_length(s, closed) <= 0) {
    PolyLoop p = point_loop(loop.samples[offset], K);
    p.basepoint = loop.basepoint;
    return p;
  }
  PolyLoop out = cyclic_shift(loop_from_path(s, closed, K), -offset);
  out.basepoint = loop.basepoint;
  return out;
}

int stride_for(const MetricSurface& s, const PolyLoop& loop, double rho) {
  const int K = loop.size();
  const double spacing = loop_length(s, loop) / K;
  int stride = spacing > 0 ? static_cast<int>(std::floor(rho / spacing)) : K / 4;
  return std::clamp(stride, 2, std::max(2, K / 4));
}

void record(const MetricSurface& s, DiscreteHomotopy& h, const PolyLoop& next) {
  const PolyLoop& prev = h.frames.back();
  std::vector<SurfacePath> moves;
  moves.reserve(next.size());
  for (int j = 0; j < next.size(); ++j) moves.push_back(short_path(s, prev.samples[j], next.samples[j]));
  append_frame(s, h, next, std::move(moves));
}

}  // namespace

PolyLoop bpfl_step(const MetricSurface& s, const PolyLoop& loop, double rho, DiscreteHomotopy* frames) {
  const int K = loop.size();
  if (K < 4 || loop_length(s, loop) <= 0) return loop;
  const int stride = stride_for(s, loop, rho);
  PolyLoop a = half_step(s, loop, stride, 0);
  if (frames) record(s, *frames, a);
  PolyLoop b = half_step(s, a, stride, stride / 2);
  if (frames) record(s, *frames, b);
  return b;
}

ShorteningOutcome bpfl_contract(const MetricSurface& s, const PolyLoop& loop, const BpflConfig& cfg) {
  const double D = cfg.D > 0 ? cfg.D : s.diameter() ? *s.diameter() : 0;
  if (!(D > 0)) throw Error(ErrorCode::ConfigError, "curve shortening needs a diameter");
  const double max_length = cfg.max_length > 0 ? cfg.max_length : 3 * D + s.point_tolerance();
  const double L0 = loop_length(s, loop);
  if (L0 > max_length)
    throw Error(ErrorCode::ContractViolation, "loop length " + std::to_string(L0) + " exceeds " +
                                                  std::to_string(max_length));
  ShorteningOutcome out;
  out.rho = cfg.rho > 0 ? cfg.rho : default_rho(s, 0, loop.size());
  out.frames = constant_homotopy(loop);
  std::vector<double> history{L0};
  PolyLoop current = loop;
  bool done = false;
  while (!done) {
    if (is_point_curve(s, current)) {
      PolyLoop p = point_loop(current.samples[0], current.size());
      p.basepoint = current.basepoint;
      if (!(p.samples == current.samples)) record(s, out.frames, p);
      out.status = ShorteningStatus::ContractedToPoint;
      break;
    }
    const int n = static_cast<int>(history.size()) - 1;
    if (n >= cfg.stall_window && history[n - cfg.stall_window] - history[n] <
                                     cfg.stall_tol * history[n - cfg.stall_window]) {
      out.status = ShorteningStatus::StalledAtGeodesic;
      out.candidate = current;
      break;
    }
    if (out.iterations >= cfg.max_iterations)
      throw Error(ErrorCode::IterationCapExceeded,
                  "curve shortening did not settle in " + std::to_string(cfg.max_iterations) + " steps");
    current = bpfl_step(s, current, out.rho, &out.frames);
    ++out.iterations;
    history.push_back(loop_length(s, current));
  }
  for (const auto& f : out.frames.frames) out.lengths.push_back(loop_length(s, f));
  out.partition = partition_by_width(s, out.frames, D);
  return out;
}

std::vector<int> partition_by_width(const MetricSurface& s, const DiscreteHomotopy& h, double D) {
  const int T = h.frame_count();
  std::vector<int> cuts{0};
  if (T <= 1) return cuts;
  const int K = h.sample_count();
  std::vector<double> acc(K, 0.0);
  for (int t = 0; t + 1 < T; ++t) {
    double step_width = 0;
    std::vector<double> step(K);
    for (int j = 0; j < K; ++j) {
      step[j] = path_length(s, h.moves[t][j]);
      step_width = std::max(step_width, step[j]);
    }
    if (step_width > D)
      throw Error(ErrorCode::SingleStepTooWide, "frames " + std::to_string(t) + " and " + std::to_string(t + 1) +
                                                    " are " + std::to_string(step_width) + " apart");
    bool fits = true;
    for (int j = 0; j < K && fits; ++j) fits = acc[j] + step[j] <= D;
    if (!fits) {
      cuts.push_back(t);
      std::fill(acc.begin(), acc.end(), 0.0);
    }
    for (int j = 0; j < K; ++j) acc[j] += step[j];
  }
  cuts.push_back(T - 1);
  return cuts;
}

namespace {

struct Section {
  std::vector<std::vector<std::pair<int, double>>> loops;  // (edge, t) crossings
};

Section section(const MetricSurface& s, const Vec3& normal, double offset) {
  const int V = s.vertex_count();
  std::vector<double> f(V);
  const double nudge = 1e-9 * s.length_scale();
  for (int v = 0; v < V; ++v) {
    f[v] = dot(normal, s.vertices()[v]) - offset;
    if (std::abs(f[v]) < nudge) f[v] = nudge;
  }
  auto crosses = [&](int e) { return (f[s.edge(e)[0]] > 0) != (f[s.edge(e)[1]] > 0); };
  std::vector<char> used(s.edge_count(), 0);
  Section out;
  for (int e0 = 0; e0 < s.edge_count(); ++e0) {
    if (used[e0] || !crosses(e0)) continue;
    std::vector<std::pair<int, double>> chain;
    int e = e0, face = s.edge_faces(e0)[0];
    while (true) {
      used[e] = 1;
      const auto [a, b] = s.edge(e);
      chain.push_back({e, f[a] / (f[a] - f[b])});
      int next = -1;
      for (int g : s.face_edges(face))
        if (g != e && crosses(g)) next = g;
      if (next < 0 || next == e0) break;
      const auto& nf = s.edge_faces(next);
      face = nf[0] == face ? nf[1] : nf[0];
      e = next;
      if (face < 0 || used[e]) break;
    }
    if (chain.size() >= 3) out.loops.push_back(std::move(chain));
  }
  return out;
}

const std::vector<std::pair<int, double>>* longest(const MetricSurface& s, const Section& sec) {
  const std::vector<std::pair<int, double>>* best = nullptr;
  double best_len = 0;
  for (const auto& c : sec.loops) {
    double len = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      len += distance(s.position(s.edge_point(c[i].first, c[i].second)),
                      s.position(s.edge_point(c[(i + 1) % c.size()].first, c[(i + 1) % c.size()].second)));
    if (len > best_len) {
      best_len = len;
      best = &c;
    }
  }
  return best;
}

}  // namespace

std::optional<PolyLoop> plane_section(const MetricSurface& s, const Vec3& normal, double offset, int samples) {
  Section sec = section(s, normal, offset);
  const auto* c = longest(s, sec);
  if (!c) return std::nullopt;
  SurfacePath closed;
  for (const auto& [e, t] : *c) closed.points.push_back(s.edge_point(e, t));
  closed.points.push_back(closed.points.front());
  return loop_from_path(s, closed, samples);
}

std::optional<PolyLoop> edge_cycle_near_section(const MetricSurface& s, const Vec3& normal, double offset,
                                                int samples) {
  Section sec = section(s, normal, offset);
  const auto* c = longest(s, sec);
  if (!c) return std::nullopt;
  std::vector<int> verts;
  for (const auto& [e, t] : *c) {
    int v = t < 0.5 ? s.edge(e)[0] : s.edge(e)[1];
    if (verts.empty() || verts.back() != v) verts.push_back(v);
  }
  while (verts.size() > 1 && verts.back() == verts.front()) verts.pop_back();
  // Drop immediate backtracks (v, w, v) so the cycle does not fold on itself.
  std::vector<int> clean;
  for (int v : verts) {
    if (clean.size() >= 2 && clean[clean.size() - 2] == v) {
      clean.pop_back();
      continue;
    }
    clean.push_back(v);
  }
  if (clean.size() < 3) return std::nullopt;
  SurfacePath closed;
  for (int v : clean) closed.points.push_back(s.vertex_point(v));
  closed.points.push_back(closed.points.front());
  return loop_from_path(s, closed, samples);
}

GeodesicSearch find_shortest_geodesic(const MetricSurface& s, int budget, std::uint64_t seed, BpflConfig cfg,
                                      int samples) {
  if (budget < 1) throw Error(ErrorCode::ConfigError, "budget must be at least 1");
  Vec3 centroid{0, 0, 0};
  for (const auto& v : s.vertices()) centroid = centroid + v;
  centroid = centroid * (1.0 / s.vertex_count());
  double spread = 0;
  for (const auto& v : s.vertices()) spread = std::max(spread, distance(v, centroid));

  struct Seed {
    std::string kind;
    Vec3 normal;
    double offset;
    bool snap;
  };
  std::vector<Seed> seeds;
  const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const char* axis_names[3] = {"x", "y", "z"};
  for (int a = 0; a < 3 && static_cast<int>(seeds.size()) < budget; ++a)
    seeds.push_back({std::string("slice-") + axis_names[a], axes[a], dot(axes[a], centroid), false});
  for (int a = 0; a < 3 && static_cast<int>(seeds.size()) < budget; ++a)
    seeds.push_back({std::string("edge-cycle-") + axis_names[a], axes[a], dot(axes[a], centroid), true});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  while (static_cast<int>(seeds.size()) < budget) {
    Vec3 n{gauss(rng), gauss(rng), gauss(rng)};
    n = n * (1.0 / std::max(norm(n), 1e-12));
    const bool cap = seeds.size() % 2 == 1;
    const double off = dot(n, centroid) + (cap ? 0.5 * spread * unit(rng) : 0.0);
    seeds.push_back({cap ? "random-cap" : "random-plane", n, off, false});
  }

  cfg.max_length = std::numeric_limits<double>::infinity();
  std::vector<SeedRun> runs(seeds.size());
  std::vector<std::optional<PolyLoop>> found(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), [&](int i) {
    const Seed& sd = seeds[i];
    SeedRun& run = runs[i];
    run.kind = sd.kind;
    auto loop = sd.snap ? edge_cycle_near_section(s, sd.normal, sd.offset, samples)
                        : plane_section(s, sd.normal, sd.offset, samples);
    if (!loop) return;
    run.initial_length = loop_length(s, *loop);
    try {
      ShorteningOutcome o = bpfl_contract(s, *loop, cfg);
      run.status = o.status;
      run.iterations = o.iterations;
      run.final_length = o.lengths.back();
      if (o.candidate) found[i] = std::move(o.candidate);
    } catch (const Error&) {
      run.status.reset();
    }
  });

  GeodesicSearch out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (found[i] && (!out.candidate || runs[i].final_length < out.length)) {
      out.candidate = found[i];
      out.length = runs[i].final_length;
    }
  }
  out.runs = std::move(runs);
  return out;
}

}  // namespace geocontract
