#include "geocontract/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>
#include <tuple>

#include "geocontract/errors.hpp"

namespace geocontract {

SteinerGraph::SteinerGraph(const MetricSurface& s, int subdivisions_)
    : subdivisions(subdivisions_), vertex_count(s.vertex_count()) {
  const int ne = s.edge_count();
  positions.reserve(vertex_count + ne * subdivisions);
  edge_of.assign(vertex_count, -1);
  t_of.assign(vertex_count, 0.0);
  for (const auto& v : s.vertices()) positions.push_back(v);
  for (int e = 0; e < ne; ++e) {
    const Vec3& a = s.vertices()[s.edge(e)[0]];
    const Vec3& b = s.vertices()[s.edge(e)[1]];
    for (int i = 0; i < subdivisions; ++i) {
      double t = double(i + 1) / double(subdivisions + 1);
      positions.push_back(lerp(a, b, t));
      edge_of.push_back(e);
      t_of.push_back(t);
    }
  }

  std::vector<std::pair<int, int>> links;
  for (int e = 0; e < ne; ++e) {
    int prev = s.edge(e)[0];
    for (int i = 0; i < subdivisions; ++i) {
      int node = steiner_node(e, i);
      links.emplace_back(prev, node);
      prev = node;
    }
    links.emplace_back(prev, s.edge(e)[1]);
  }
  std::vector<int> nodes;
  for (int f = 0; f < s.face_count(); ++f) {
    const auto& tri = s.triangles()[f];
    const auto& fe = s.face_edges(f);
    // Corner i is opposite edge (i+1)%3.
    for (int i = 0; i < 3; ++i) {
      int opposite = fe[(i + 1) % 3];
      for (int k = 0; k < subdivisions; ++k) links.emplace_back(tri[i], steiner_node(opposite, k));
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        for (int a = 0; a < subdivisions; ++a)
          for (int b = 0; b < subdivisions; ++b)
            links.emplace_back(steiner_node(fe[i], a), steiner_node(fe[j], b));
  }

  const int n = node_count();
  offsets.assign(n + 1, 0);
  for (const auto& [a, b] : links) {
    ++offsets[a + 1];
    ++offsets[b + 1];
  }
  for (int i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  targets.resize(offsets[n]);
  weights.resize(offsets[n]);
  std::vector<int> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& [a, b] : links) {
    double w = distance(positions[a], positions[b]);
    targets[fill[a]] = b;
    weights[fill[a]++] = w;
    targets[fill[b]] = a;
    weights[fill[b]++] = w;
  }
}

void SteinerGraph::face_nodes(const MetricSurface& s, int f, std::vector<int>& out) const {
  for (int c : s.triangles()[f]) out.push_back(c);
  for (int e : s.face_edges(f))
    for (int k = 0; k < subdivisions; ++k) out.push_back(steiner_node(e, k));
}

SurfacePoint SteinerGraph::node_point(const MetricSurface& s, int node) const {
  if (node < vertex_count) return s.vertex_point(node);
  return s.edge_point(edge_of[node], t_of[node]);
}

namespace {

struct Workspace {
  std::vector<double> g;
  std::vector<int> parent;
  std::vector<unsigned> seen;
  std::vector<unsigned> closed;
  std::vector<unsigned> target;
  unsigned generation = 0;

  void prepare(int n) {
    if (static_cast<int>(g.size()) < n) {
      g.resize(n);
      parent.resize(n);
      seen.assign(n, 0);
      closed.assign(n, 0);
      target.assign(n, 0);
      generation = 0;
    }
    if (++generation == 0) {
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(closed.begin(), closed.end(), 0);
      std::fill(target.begin(), target.end(), 0);
      generation = 1;
    }
  }
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

// Path vertex during straightening: either a fixed endpoint, a mesh vertex,
// or a point sliding along a mesh edge.
struct Crossing {
  enum Kind { Fixed, Vertex, OnEdge } kind;
  SurfacePoint fixed;
  int id = -1;
  double t = 0;
};

Vec3 crossing_position(const MetricSurface& s, const Crossing& c) {
  switch (c.kind) {
    case Crossing::Fixed: return s.position(c.fixed);
    case Crossing::Vertex: return s.vertices()[c.id];
    case Crossing::OnEdge:
      return lerp(s.vertices()[s.edge(c.id)[0]], s.vertices()[s.edge(c.id)[1]], c.t);
  }
  return {};
}

// Minimizer of |P(t)-A| + |P(t)-B| along the segment a + t(b-a), by rotating
// B about the line into the half-plane opposite A.
double best_edge_parameter(const Vec3& a, const Vec3& b, const Vec3& A, const Vec3& B) {
  Vec3 d = b - a;
  double dd = dot(d, d);
  double ta = dot(A - a, d) / dd;
  double tb = dot(B - a, d) / dd;
  double ha = distance(A, a + d * ta);
  double hb = distance(B, a + d * tb);
  double t = (ha + hb) > 0 ? ta + (tb - ta) * ha / (ha + hb) : 0.5 * (ta + tb);
  return std::clamp(t, 0.0, 1.0);
}

void straighten(const MetricSurface& s, std::vector<Crossing>& path) {
  if (path.size() < 3) return;
  const double tol = 1e-12 * s.length_scale();
  for (int sweep = 0; sweep < 2000; ++sweep) {
    double moved = 0;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      auto& c = path[i];
      if (c.kind != Crossing::OnEdge) continue;
      const Vec3& a = s.vertices()[s.edge(c.id)[0]];
      const Vec3& b = s.vertices()[s.edge(c.id)[1]];
      double t = best_edge_parameter(a, b, crossing_position(s, path[i - 1]),
                                     crossing_position(s, path[i + 1]));
      moved = std::max(moved, std::abs(t - c.t) * s.edge_length(c.id));
      c.t = t;
    }
    if (moved < tol) break;
  }
}

// Faces incident to v whose closure holds the crossing.
int fan_face(const MetricSurface& s, const Crossing& c, int v) {
  auto incident = [&](int f) {
    const auto& t = s.triangles()[f];
    return t[0] == v || t[1] == v || t[2] == v;
  };
  std::vector<int> faces;
  switch (c.kind) {
    case Crossing::Fixed: faces = s.faces_containing(c.fixed); break;
    case Crossing::Vertex: {
      int e = s.find_edge(c.id, v);
      if (e >= 0) faces = {s.edge_faces(e)[0], s.edge_faces(e)[1]};
      break;
    }
    case Crossing::OnEdge: {
      const auto& ef = s.edge_faces(c.id);
      faces = {ef[0], ef[1]};
      if (c.t <= 0 || c.t >= 1) {
        int w = s.edge(c.id)[c.t <= 0 ? 0 : 1];
        for (int f : s.vertex_faces(w)) faces.push_back(f);
      }
      break;
    }
  }
  for (int f : faces)
    if (incident(f)) return f;
  return -1;
}

double angle_between(const Vec3& a, const Vec3& b) {
  double na = norm(a), nb = norm(b);
  if (na == 0 || nb == 0) return 0;
  return std::acos(std::clamp(dot(a, b) / (na * nb), -1.0, 1.0));
}

int other_end(const MetricSurface& s, int e, int v) { return s.edge(e)[0] == v ? s.edge(e)[1] : s.edge(e)[0]; }

// Edges incident to v crossed when sweeping around v from the face holding
// `from` to the face holding `to` in the cheaper direction, provided the
// swept angle is below pi. Returns false when the path must stay on v.
bool release_route(const MetricSurface& s, int v, int fp, const Vec3& P, int fq, const Vec3& Q,
                   std::vector<int>& crossed) {
  const Vec3 x = s.vertices()[v];
  if (fp == fq) {
    crossed.clear();
    return true;
  }
  double best = std::numbers::pi - 1e-9;
  bool found = false;
  const int valence = static_cast<int>(s.vertex_faces(v).size());
  for (int start : s.face_edges(fp)) {
    const auto& ed = s.edge(start);
    if (ed[0] != v && ed[1] != v) continue;
    std::vector<int> route;
    int f = fp, e = start;
    double angle = angle_between(P - x, s.vertices()[other_end(s, e, v)] - x);
    bool reached = false;
    for (int step = 0; step < valence && angle < best; ++step) {
      route.push_back(e);
      const auto& ef = s.edge_faces(e);
      f = ef[0] == f ? ef[1] : ef[0];
      Vec3 dir = s.vertices()[other_end(s, e, v)] - x;
      if (f == fq) {
        angle += angle_between(dir, Q - x);
        reached = true;
        break;
      }
      int next = -1;
      for (int g : s.face_edges(f)) {
        const auto& gd = s.edge(g);
        if (g != e && (gd[0] == v || gd[1] == v)) next = g;
      }
      angle += angle_between(dir, s.vertices()[other_end(s, next, v)] - x);
      e = next;
    }
    if (reached && angle < best) {
      best = angle;
      crossed = route;
      found = true;
    }
  }
  return found;
}

// Replaces interior vertex crossings that the path can bend away from by
// crossings of the incident edges. Returns true when anything changed.
bool release_vertices(const MetricSurface& s, std::vector<Crossing>& path) {
  bool changed = false;
  std::vector<Crossing> out;
  out.push_back(path.front());
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    Crossing c = path[i];
    int v = -1;
    if (c.kind == Crossing::Vertex) v = c.id;
    else if (c.kind == Crossing::OnEdge && (c.t <= 0 || c.t >= 1)) v = s.edge(c.id)[c.t <= 0 ? 0 : 1];
    if (v < 0) {
      out.push_back(c);
      continue;
    }
    const Crossing& prev = out.back();
    const Crossing& next = path[i + 1];
    Vec3 P = crossing_position(s, prev), Q = crossing_position(s, next);
    const Vec3 x = s.vertices()[v];
    int fp = fan_face(s, prev, v), fq = fan_face(s, next, v);
    std::vector<int> crossed;
    if (fp < 0 || fq < 0 || distance(P, x) == 0 || distance(Q, x) == 0 ||
        !release_route(s, v, fp, P, fq, Q, crossed)) {
      out.push_back(c);
      continue;
    }
    for (int e : crossed) {
      double nudge = std::min(0.25, 1e-3 * s.length_scale() / s.edge_length(e));
      out.push_back({Crossing::OnEdge, {}, e, s.edge(e)[0] == v ? nudge : 1.0 - nudge});
    }
    changed = true;
  }
  out.push_back(path.back());
  if (changed) path = std::move(out);
  return changed;
}

struct Vec2 {
  double x = 0, y = 0;
};
Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
double cross2(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

struct Portal {
  Vec2 left, right;
  int left_id = -1, right_id = -1;
};

// Third corner of a triangle over segment ab with the given side lengths,
// placed on the opposite side of ab from `away`.
Vec2 place_corner(Vec2 a, Vec2 b, double ac, double bc, Vec2 away) {
  Vec2 ab = b - a;
  double L = std::hypot(ab.x, ab.y);
  double x = (ac * ac - bc * bc + L * L) / (2 * L);
  double h = std::sqrt(std::max(0.0, ac * ac - x * x));
  Vec2 base{a.x + ab.x * x / L, a.y + ab.y * x / L};
  Vec2 perp{-ab.y / L, ab.x / L};
  double side = cross2(ab, away - a) > 0 ? -1.0 : 1.0;
  return {base.x + side * h * perp.x, base.y + side * h * perp.y};
}

bool on_edge(const MetricSurface& s, const SurfacePoint& p, int e) {
  const auto& ed = s.edge(e);
  for (int v : s.carriers(p))
    if (v != ed[0] && v != ed[1]) return false;
  return true;
}

bool face_has_edge(const MetricSurface& s, int f, int e) {
  const auto& fe = s.face_edges(f);
  return fe[0] == e || fe[1] == e || fe[2] == e;
}

// Shortest path from a to b through the strip of faces crossed by `edges`,
// by unfolding the strip into the plane and pulling the string taut.
// Writes one crossing per edge. Returns false on a malformed strip.
bool solve_strip(const MetricSurface& s, const SurfacePoint& a, std::vector<int> edges,
                 const SurfacePoint& b, std::vector<Crossing>& out) {
  while (!edges.empty() && on_edge(s, a, edges.front())) edges.erase(edges.begin());
  while (!edges.empty() && on_edge(s, b, edges.back())) edges.pop_back();
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  out.clear();
  if (edges.empty()) return s.common_face(a, b) >= 0;

  int f = -1;
  for (int g : s.faces_containing(a))
    if (face_has_edge(s, g, edges.front())) f = g;
  if (f < 0) return false;

  const auto& V = s.vertices();
  std::array<int, 3> ids = s.triangles()[f];
  std::array<Vec2, 3> pos;
  pos[0] = {0, 0};
  pos[1] = {distance(V[ids[0]], V[ids[1]]), 0};
  pos[2] = place_corner(pos[0], pos[1], distance(V[ids[0]], V[ids[2]]), distance(V[ids[1]], V[ids[2]]),
                        {0, -1});
  auto at = [&](const SurfacePoint& p, int face) {
    SurfacePoint r = s.rebase(p, face);
    return Vec2{r.bary[0] * pos[0].x + r.bary[1] * pos[1].x + r.bary[2] * pos[2].x,
                r.bary[0] * pos[0].y + r.bary[1] * pos[1].y + r.bary[2] * pos[2].y};
  };
  const Vec2 start = at(a, f);

  const int k = static_cast<int>(edges.size());
  std::vector<Portal> portals(k + 2);
  std::vector<std::array<Vec2, 2>> edge_xy(k);
  portals[0] = {start, start, -1, -1};
  for (int i = 0; i < k; ++i) {
    const int e = edges[i];
    if (!face_has_edge(s, f, e)) return false;
    const auto& ed = s.edge(e);
    int ia = -1, ib = -1, ic = -1;
    for (int c = 0; c < 3; ++c) {
      if (ids[c] == ed[0]) ia = c;
      else if (ids[c] == ed[1]) ib = c;
      else ic = c;
    }
    Vec2 pa = pos[ia], pb = pos[ib], away = pos[ic];
    edge_xy[i] = {pa, pb};
    if (cross2(pa - away, pb - away) > 0)
      portals[i + 1] = {pb, pa, ed[1], ed[0]};
    else
      portals[i + 1] = {pa, pb, ed[0], ed[1]};
    const auto& ef = s.edge_faces(e);
    int g = ef[0] == f ? ef[1] : ef[0];
    const auto& gt = s.triangles()[g];
    int c = gt[0] != ed[0] && gt[0] != ed[1] ? gt[0] : (gt[1] != ed[0] && gt[1] != ed[1] ? gt[1] : gt[2]);
    Vec2 pc = place_corner(pa, pb, distance(V[ed[0]], V[c]), distance(V[ed[1]], V[c]), away);
    for (int q = 0; q < 3; ++q) pos[q] = gt[q] == ed[0] ? pa : gt[q] == ed[1] ? pb : pc;
    ids = gt;
    f = g;
  }
  bool end_ok = false;
  for (int g : s.faces_containing(b)) end_ok = end_ok || g == f;
  if (!end_ok) return false;
  const Vec2 goal = at(b, f);
  portals[k + 1] = {goal, goal, -1, -1};

  // Simple funnel: apexes are the taut string's corners.
  struct Apex {
    Vec2 p;
    int id, portal;
  };
  std::vector<Apex> apexes{{start, -1, 0}};
  auto area = [](Vec2 o, Vec2 p, Vec2 q) { return -cross2(p - o, q - o); };
  auto same = [](Vec2 p, Vec2 q) { return p.x == q.x && p.y == q.y; };
  Vec2 apex = start, left = start, right = start;
  int apex_i = 0, left_i = 0, right_i = 0;
  int left_id = -1, right_id = -1;
  for (int i = 1; i < k + 2; ++i) {
    const Portal& P = portals[i];
    if (area(apex, right, P.right) <= 0) {
      if (same(apex, right) || area(apex, left, P.right) > 0) {
        right = P.right;
        right_i = i;
        right_id = P.right_id;
      } else {
        apexes.push_back({left, left_id, left_i});
        apex = left;
        apex_i = left_i;
        right = left = apex;
        right_i = left_i = apex_i;
        right_id = left_id;
        i = apex_i;
        continue;
      }
    }
    if (area(apex, left, P.left) >= 0) {
      if (same(apex, left) || area(apex, right, P.left) < 0) {
        left = P.left;
        left_i = i;
        left_id = P.left_id;
      } else {
        apexes.push_back({right, right_id, right_i});
        apex = right;
        apex_i = right_i;
        right = left = apex;
        right_i = left_i = apex_i;
        left_id = right_id;
        i = apex_i;
        continue;
      }
    }
  }
  apexes.push_back({goal, -1, k + 1});

  std::size_t j = 0;
  for (int i = 1; i <= k; ++i) {
    while (j + 2 < apexes.size() && apexes[j + 1].portal < i) ++j;
    const int e = edges[i - 1];
    const auto& ed = s.edge(e);
    const Apex& p0 = apexes[j];
    const Apex& p1 = apexes[j + 1];
    int hit = -1;
    for (int id : {p0.id, p1.id})
      if (id >= 0 && (id == ed[0] || id == ed[1])) hit = id;
    if (hit >= 0) {
      out.push_back({Crossing::Vertex, {}, hit});
      continue;
    }
    Vec2 A = edge_xy[i - 1][0], B = edge_xy[i - 1][1];
    Vec2 d = p1.p - p0.p;
    double den = cross2(B - A, d);
    double t = den != 0 ? cross2(p0.p - A, d) / den : 0.5;
    out.push_back({Crossing::OnEdge, {}, e, std::clamp(t, 0.0, 1.0)});
  }
  return true;
}

bool is_anchor(const Crossing& c) { return c.kind != Crossing::OnEdge; }

SurfacePoint anchor_point(const MetricSurface& s, const Crossing& c) {
  return c.kind == Crossing::Fixed ? c.fixed : s.vertex_point(c.id);
}

// Makes every run of edge crossings between anchors taut.
void pull_taut(const MetricSurface& s, std::vector<Crossing>& chain) {
  for (auto& c : chain)
    if (c.kind == Crossing::OnEdge && (c.t <= 0 || c.t >= 1))
      c = {Crossing::Vertex, {}, s.edge(c.id)[c.t <= 0 ? 0 : 1]};
  std::vector<Crossing> out{chain.front()};
  std::size_t i = 0;
  std::vector<Crossing> solved;
  while (i + 1 < chain.size()) {
    std::size_t j = i + 1;
    while (!is_anchor(chain[j])) ++j;
    std::vector<int> edges;
    for (std::size_t q = i + 1; q < j; ++q) edges.push_back(chain[q].id);
    if (solve_strip(s, anchor_point(s, chain[i]), edges, anchor_point(s, chain[j]), solved)) {
      out.insert(out.end(), solved.begin(), solved.end());
    } else {
      std::vector<Crossing> piece(chain.begin() + i, chain.begin() + j + 1);
      straighten(s, piece);
      out.insert(out.end(), piece.begin() + 1, piece.end() - 1);
    }
    out.push_back(chain[j]);
    i = j;
  }
  chain = std::move(out);
}

bool point_less(const MetricSurface& s, const SurfacePoint& a, const SurfacePoint& b) {
  Vec3 pa = s.position(a), pb = s.position(b);
  return std::tie(pa.x, pa.y, pa.z, a.face, a.bary) < std::tie(pb.x, pb.y, pb.z, b.face, b.bary);
}

SurfacePath ordered_geodesic(const MetricSurface& s, const SurfacePoint& p, const SurfacePoint& q,
                             double epsilon) {
  const Vec3 pp = s.position(p), pq = s.position(q);
  if (distance(pp, pq) == 0.0) return {{p, q}};

  int subdivisions = std::clamp(static_cast<int>(std::ceil(0.25 / epsilon)), 1, 8);
  const SteinerGraph& graph = s.steiner_graph(subdivisions);
  Workspace& ws = workspace();
  ws.prepare(graph.node_count());
  const unsigned gen = ws.generation;

  double best = std::numeric_limits<double>::infinity();
  int best_node = -1;
  if (s.common_face(p, q) >= 0) best = distance(pp, pq);

  std::vector<int> nodes;
  for (int f : s.faces_containing(q)) graph.face_nodes(s, f, nodes);
  for (int n : nodes) ws.target[n] = gen;
  nodes.clear();
  for (int f : s.faces_containing(p)) graph.face_nodes(s, f, nodes);

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (int n : nodes) {
    double g = distance(pp, graph.positions[n]);
    if (ws.seen[n] == gen && ws.g[n] <= g) continue;
    ws.seen[n] = gen;
    ws.g[n] = g;
    ws.parent[n] = -1;
    open.emplace(g + distance(graph.positions[n], pq), n);
  }
  while (!open.empty()) {
    auto [f, u] = open.top();
    open.pop();
    if (f >= best) break;
    if (ws.closed[u] == gen) continue;
    ws.closed[u] = gen;
    const double gu = ws.g[u];
    if (ws.target[u] == gen) {
      double cand = gu + distance(graph.positions[u], pq);
      if (cand < best) {
        best = cand;
        best_node = u;
      }
    }
    for (int k = graph.offsets[u]; k < graph.offsets[u + 1]; ++k) {
      int v = graph.targets[k];
      double g = gu + graph.weights[k];
      if (ws.seen[v] == gen && ws.g[v] <= g) continue;
      ws.seen[v] = gen;
      ws.g[v] = g;
      ws.parent[v] = u;
      open.emplace(g + distance(graph.positions[v], pq), v);
    }
  }

  std::vector<Crossing> chain;
  chain.push_back({Crossing::Fixed, p});
  if (best_node >= 0) {
    std::vector<int> trail;
    for (int n = best_node; n >= 0; n = ws.parent[n]) trail.push_back(n);
    std::reverse(trail.begin(), trail.end());
    for (int n : trail) {
      if (n < graph.vertex_count)
        chain.push_back({Crossing::Vertex, {}, n});
      else
        chain.push_back({Crossing::OnEdge, {}, graph.edge_of[n], graph.t_of[n]});
    }
  }
  chain.push_back({Crossing::Fixed, q});
  pull_taut(s, chain);
  for (int round = 0; round < 16 && release_vertices(s, chain); ++round) pull_taut(s, chain);

  SurfacePath out;
  out.points.reserve(chain.size());
  const Vec3 last = s.position(q);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& c = chain[i];
    SurfacePoint pt;
    switch (c.kind) {
      case Crossing::Fixed: pt = c.fixed; break;
      case Crossing::Vertex: pt = s.vertex_point(c.id); break;
      case Crossing::OnEdge:
        if (c.t <= 0) pt = s.vertex_point(s.edge(c.id)[0]);
        else if (c.t >= 1) pt = s.vertex_point(s.edge(c.id)[1]);
        else pt = s.edge_point(c.id, c.t);
        break;
    }
    if (i > 0 && i + 1 < chain.size()) {
      Vec3 x = s.position(pt);
      if (distance(x, s.position(out.points.back())) == 0.0 || distance(x, last) == 0.0) continue;
    }
    out.points.push_back(pt);
  }
  return out;
}

}  // namespace

SurfacePath geodesic(const MetricSurface& s, const SurfacePoint& p, const SurfacePoint& q,
                     double epsilon) {
  if (!(epsilon > 0 && epsilon <= 1)) throw Error(ErrorCode::ConfigError, "epsilon must lie in (0, 1]");
  if (point_less(s, q, p)) return reversed(ordered_geodesic(s, q, p, epsilon));
  return ordered_geodesic(s, p, q, epsilon);
}

SurfacePath geodesic(const MetricSurface& s, const SurfacePoint& p, const SurfacePoint& q) {
  return geodesic(s, p, q, s.epsilon());
}

double geodesic_distance(const MetricSurface& s, const SurfacePoint& p, const SurfacePoint& q) {
  return path_length(s, geodesic(s, p, q));
}

std::vector<double> vertex_distances(const MetricSurface& s, int source, double radius) {
  const SteinerGraph& graph = s.steiner_graph(s.steiner_subdivisions());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(graph.node_count(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[source] = 0;
  open.emplace(0.0, source);
  const double limit = radius > 0 ? radius : inf;
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    for (int k = graph.offsets[u]; k < graph.offsets[u + 1]; ++k) {
      int v = graph.targets[k];
      double nd = d + graph.weights[k];
      if (nd < dist[v] && nd < limit) {
        dist[v] = nd;
        open.emplace(nd, v);
      }
    }
  }
  dist.resize(s.vertex_count());
  return dist;
}

double estimate_diameter(MetricSurface& s, int sample_count, std::uint64_t seed) {
  if (sample_count < 2) throw Error(ErrorCode::ConfigError, "sample_count must be at least 2");
  std::vector<int> order(s.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  if (sample_count < s.vertex_count()) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(sample_count);
  }
  double best = 0;
  for (int v : order) {
    auto dist = vertex_distances(s, v);
    int far = static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
    double graph_d = dist[far];
    double smooth = geodesic_distance(s, s.vertex_point(v), s.vertex_point(far));
    best = std::max(best, std::min(graph_d, smooth));
  }
  s.set_diameter(best);
  return best;
}

}  // namespace geocontract
