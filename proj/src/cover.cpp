#include "geocontract/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>

#include "geocontract/errors.hpp"
#include "geocontract/geodesic.hpp"

namespace geocontract {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dijkstra over mesh edges restricted to the element's members. Results are
// aligned with e.members.
void member_dijkstra(const MetricSurface& s, const CoverElement& e, int source,
                     std::vector<double>& dist, std::vector<int>& parent) {
  const int n = static_cast<int>(e.members.size());
  dist.assign(n, kInf);
  parent.assign(n, -1);
  int src = e.member_slot(source);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[src] = 0;
  open.emplace(0.0, src);
  while (!open.empty()) {
    auto [d, slot] = open.top();
    open.pop();
    if (d > dist[slot]) continue;
    for (const auto& [w, edge] : s.vertex_neighbors(e.members[slot])) {
      int ws = e.member_slot(w);
      if (ws < 0) continue;
      double nd = d + s.edge_length(edge);
      if (nd < dist[ws]) {
        dist[ws] = nd;
        parent[ws] = e.members[slot];
        open.emplace(nd, ws);
      }
    }
  }
}

SurfacePath trace(const MetricSurface& s, const CoverElement& e, const std::vector<int>& parent,
                  int v) {
  SurfacePath out;
  for (int u = v; u >= 0; u = parent[e.member_slot(u)]) out.points.push_back(s.vertex_point(u));
  if (out.points.size() == 1) out.points.push_back(out.points.front());
  return out;
}

CoverElement make_element(const MetricSurface& s, int center, double radius, ElementKind kind) {
  CoverElement e;
  e.center_vertex = center;
  e.center = s.vertex_point(center);
  e.radius = radius;
  e.kind = kind;
  auto dist = vertex_distances(s, center, radius);
  // Keep the part of the ball joined to the center by mesh edges inside it;
  // on thin regions a short path across faces can reach an isolated vertex.
  std::vector<char> seen(s.vertex_count(), 0);
  std::vector<int> stack{center};
  seen[center] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    e.members.push_back(v);
    for (const auto& [w, edge] : s.vertex_neighbors(v)) {
      (void)edge;
      if (!seen[w] && dist[w] < radius) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::sort(e.members.begin(), e.members.end());
  return e;
}

}  // namespace

int CoverElement::member_slot(int v) const {
  auto it = std::lower_bound(members.begin(), members.end(), v);
  return it != members.end() && *it == v ? static_cast<int>(it - members.begin()) : -1;
}

bool CoverElement::contains(const MetricSurface& s, const SurfacePoint& p) const {
  for (int v : s.carriers(p))
    if (contains_vertex(v)) return true;
  return false;
}

bool CoverElement::contains(const MetricSurface& s, const SurfacePath& path) const {
  for (const auto& p : path.points)
    if (!contains(s, p)) return false;
  return true;
}

void index_element(const MetricSurface& s, CoverElement& e) {
  if (e.members.empty()) throw Error(ErrorCode::DisconnectedElement, "element has no members");
  std::sort(e.members.begin(), e.members.end());
  e.members.erase(std::unique(e.members.begin(), e.members.end()), e.members.end());
  if (!e.contains_vertex(e.center_vertex))
    throw Error(ErrorCode::DisconnectedElement, "element center is not a member");
  member_dijkstra(s, e, e.center_vertex, e.center_dist, e.parent);
  e.eccentricity = 0;
  for (double d : e.center_dist) {
    if (d == kInf)
      throw Error(ErrorCode::DisconnectedElement,
                  "element at vertex " + std::to_string(e.center_vertex) + " is not connected");
    e.eccentricity = std::max(e.eccentricity, d);
  }
}

SurfacePath path_to_center(const MetricSurface& s, const CoverElement& e, int v) {
  return trace(s, e, e.parent, v);
}

SurfacePath connector(const MetricSurface& s, const CoverElement& e, const SurfacePoint& p) {
  const Vec3 x = s.position(p);
  int best = -1;
  double best_len = kInf;
  for (int v : s.carriers(p)) {
    int slot = e.member_slot(v);
    if (slot < 0) continue;
    double len = distance(x, s.vertices()[v]) + e.center_dist[slot];
    if (len < best_len) {
      best_len = len;
      best = v;
    }
  }
  if (best < 0) throw Error(ErrorCode::LoopEscapesElement, "point is outside the element");
  SurfacePath out{{p}};
  SurfacePath tail = path_to_center(s, e, best);
  if (distance(x, s.vertices()[best]) > 0)
    out.points.insert(out.points.end(), tail.points.begin(), tail.points.end());
  else
    out.points.insert(out.points.end(), tail.points.begin() + 1, tail.points.end());
  if (out.points.size() == 1) out.points.push_back(p);
  return out;
}

SurfacePath in_element_path(const MetricSurface& s, const CoverElement& e, int from, int to) {
  std::vector<double> dist;
  std::vector<int> parent;
  member_dijkstra(s, e, to, dist, parent);
  if (dist[e.member_slot(from)] == kInf)
    throw Error(ErrorCode::DisconnectedElement, "members are not connected inside the element");
  return trace(s, e, parent, from);
}

bool GoodCoverCertificate::intersecting(int i, int j) const {
  return pairing.count({std::min(i, j), std::max(i, j)}) > 0;
}

BallCover build_ball_cover(const MetricSurface& s, double r, std::uint64_t seed, int cap) {
  if (!(r > 0)) throw Error(ErrorCode::ConfigError, "cover radius must be positive");
  const double spacing = r / 4;
  // Disks of radius spacing/2 around the centers are disjoint.
  const double estimate = s.area() / (std::numbers::pi * 0.25 * spacing * spacing);
  if (estimate > 4.0 * cap)
    throw Error(ErrorCode::RadiusTooSmall, "radius " + std::to_string(r) + " needs about " +
                                               std::to_string(static_cast<long long>(estimate)) +
                                               " elements");
  std::vector<int> order(s.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<char> covered(s.vertex_count(), 0);
  std::vector<int> centers;
  for (int v : order) {
    if (covered[v]) continue;
    centers.push_back(v);
    if (static_cast<int>(centers.size()) > cap)
      throw Error(ErrorCode::RadiusTooSmall, "cover element count exceeds cap " + std::to_string(cap));
    for (int u : make_element(s, v, spacing, ElementKind::Refinement).members) covered[u] = 1;
  }
  std::sort(centers.begin(), centers.end());
  BallCover out;
  for (int c : centers) {
    out.refinement.push_back(make_element(s, c, spacing, ElementKind::Refinement));
    out.cover.push_back(make_element(s, c, r, ElementKind::Cover));
  }
  return out;
}

GoodCoverCertificate certify_cover(const MetricSurface& s, std::vector<CoverElement> refinement,
                                   std::vector<CoverElement> cover, int trials, std::uint64_t seed,
                                   int samples) {
  if (refinement.empty() || cover.empty())
    throw Error(ErrorCode::NotAGoodCover, "cover has no elements");
  for (auto& e : refinement) index_element(s, e);
  for (auto& e : cover) index_element(s, e);

  GoodCoverCertificate cert;
  cert.seed = seed;
  cert.slack = s.max_edge_length();
  cert.N = static_cast<int>(std::max(refinement.size(), cover.size()));

  cert.vertex_refinement.assign(s.vertex_count(), {});
  std::vector<char> in_cover(s.vertex_count(), 0);
  for (int i = 0; i < static_cast<int>(refinement.size()); ++i)
    for (int v : refinement[i].members) cert.vertex_refinement[v].push_back(i);
  for (const auto& e : cover)
    for (int v : e.members) in_cover[v] = 1;
  for (int v = 0; v < s.vertex_count(); ++v)
    if (cert.vertex_refinement[v].empty() || !in_cover[v])
      throw Error(ErrorCode::NotAGoodCover, "vertex " + std::to_string(v) + " is not covered");

  // Intersecting refinement pairs: a shared member, or a mesh edge between
  // members (its interior lies in both open stars).
  std::vector<std::pair<int, int>> pairs;
  for (int v = 0; v < s.vertex_count(); ++v) {
    const auto& here = cert.vertex_refinement[v];
    for (int i : here) {
      for (int j : here) if (i <= j) pairs.emplace_back(i, j);
      for (const auto& [w, edge] : s.vertex_neighbors(v)) {
        (void)edge;
        if (w <= v) continue;
        for (int j : cert.vertex_refinement[w]) pairs.emplace_back(std::min(i, j), std::max(i, j));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  // Cover elements containing each vertex, for candidate lookup.
  std::vector<std::vector<int>> vertex_cover(s.vertex_count());
  for (int k = 0; k < static_cast<int>(cover.size()); ++k)
    for (int v : cover[k].members) vertex_cover[v].push_back(k);
  auto holds = [&](int k, const CoverElement& a) {
    return std::includes(cover[k].members.begin(), cover[k].members.end(), a.members.begin(),
                         a.members.end());
  };
  for (const auto& [i, j] : pairs) {
    const auto& a = refinement[i];
    const auto& b = refinement[j];
    std::vector<int> candidates;
    for (int k : {i, j})
      if (k < static_cast<int>(cover.size()) && cover[k].center_vertex == refinement[k].center_vertex)
        candidates.push_back(k);
    for (int k : vertex_cover[a.center_vertex]) candidates.push_back(k);
    int found = -1;
    for (int k : candidates)
      if (holds(k, a) && holds(k, b)) {
        found = k;
        break;
      }
    if (found < 0)
      throw Error(ErrorCode::NotAGoodCover, "refinement elements " + std::to_string(i) + " and " +
                                                std::to_string(j) + " meet but no cover element holds both");
    cert.pairing.emplace(std::make_pair(i, j), found);
  }

  std::mt19937_64 rng(seed);
  auto measure_F = [&](const std::vector<CoverElement>& elems) {
    double F = 0;
    for (const auto& e : elems) F = std::max(F, e.eccentricity + cert.slack);
    std::vector<double> dist;
    std::vector<int> parent;
    for (int t = 0; t < trials; ++t) {
      const auto& e = elems[rng() % elems.size()];
      int u = e.members[rng() % e.members.size()];
      int v = e.members[rng() % e.members.size()];
      member_dijkstra(s, e, u, dist, parent);
      F = std::max(F, dist[e.member_slot(v)] + 2 * cert.slack);
    }
    return F;
  };
  cert.F_A = measure_F(refinement);
  cert.F_B = measure_F(cover);
  cert.F = std::max(cert.F_A, cert.F_B);
  cert.pair_trials = trials;

  double radial = 0;
  for (const auto& e : cover) radial = std::max(radial, e.eccentricity + cert.slack);
  for (int t = 0; t < trials; ++t) {
    const auto& e = cover[t % cover.size()];
    PolyLoop loop = random_element_loop(s, e, rng(), samples);
    cert.G_sampled = std::max(cert.G_sampled, homotopy_width(s, contract_in_ball(s, loop, e)));
  }
  cert.G_trials = trials;
  cert.G = std::max(radial, cert.G_sampled);

  cert.refinement = std::move(refinement);
  cert.cover = std::move(cover);
  return cert;
}

DiscreteHomotopy contract_in_ball(const MetricSurface& s, const PolyLoop& loop,
                                  const CoverElement& element) {
  for (int j = 0; j < loop.size(); ++j)
    if (!element.contains(s, loop.samples[j]) || !element.contains(s, loop.segments[j]))
      throw Error(ErrorCode::LoopEscapesElement, "loop leaves the element at sample " + std::to_string(j));
  const int k = loop.size();
  std::vector<SurfacePath> rails;
  std::vector<double> lengths;
  double longest = 0;
  for (const auto& p : loop.samples) {
    rails.push_back(connector(s, element, p));
    lengths.push_back(path_length(s, rails.back()));
    longest = std::max(longest, lengths.back());
  }
  DiscreteHomotopy h = constant_homotopy(loop);
  if (longest <= 0) return h;
  const double stride = std::max(element.radius, s.max_edge_length()) / 2;
  const int steps = std::clamp(static_cast<int>(std::ceil(longest / stride)), 1, 8);
  for (int i = 1; i <= steps; ++i) {
    const double a = double(i - 1) / steps, b = double(i) / steps;
    std::vector<SurfacePoint> pts;
    std::vector<SurfacePath> moves;
    for (int j = 0; j < k; ++j) {
      SurfacePath m = subpath(s, rails[j], a * lengths[j], b * lengths[j]);
      m.points.front() = h.frames.back().samples[j];
      if (i == steps) m.points.back() = element.center;
      pts.push_back(m.points.back());
      moves.push_back(std::move(m));
    }
    PolyLoop frame = i == steps ? point_loop(element.center, k) : make_loop(s, std::move(pts));
    frame.basepoint = loop.basepoint;
    append_frame(s, h, std::move(frame), std::move(moves));
  }
  return h;
}

PolyLoop random_element_loop(const MetricSurface& s, const CoverElement& e, std::uint64_t seed,
                             int samples) {
  std::mt19937_64 rng(seed);
  int a = e.members[rng() % e.members.size()];
  int b = e.members[rng() % e.members.size()];
  int c = e.members[rng() % e.members.size()];
  SurfacePath closed = in_element_path(s, e, a, b);
  append_path(closed, in_element_path(s, e, b, c));
  append_path(closed, in_element_path(s, e, c, a));
  return loop_from_path(s, closed, samples);
}

}  // namespace geocontract
