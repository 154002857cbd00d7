#include "geocontract/nerve.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "geocontract/errors.hpp"

namespace geocontract {

int NerveGraph::edge_between(int a, int b) const {
  auto it = index.find({std::min(a, b), std::max(a, b)});
  return it == index.end() ? -1 : it->second;
}

SurfacePath NerveGraph::edge_curve(int a, int b) const {
  int e = edge_between(a, b);
  if (e < 0) throw Error(ErrorCode::ContractViolation, "nerve vertices are not adjacent");
  return edges[e].i == a ? edges[e].curve : reversed(edges[e].curve);
}

namespace {

void add_edge(NerveGraph& g, NerveEdge edge) {
  int id = static_cast<int>(g.edges.size());
  g.index.emplace(std::make_pair(edge.i, edge.j), id);
  g.adjacency[edge.i].push_back(edge.j);
  g.adjacency[edge.j].push_back(edge.i);
  g.edges.push_back(std::move(edge));
}

void finish(NerveGraph& g) {
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
}

}  // namespace

NerveGraph build_nerve(const MetricSurface& s, const GoodCoverCertificate& cert) {
  NerveGraph g;
  const int n = static_cast<int>(cert.refinement.size());
  g.adjacency.assign(n, {});
  for (const auto& e : cert.refinement) {
    g.points.push_back(e.center);
    g.center_vertex.push_back(e.center_vertex);
  }
  const double limit = 2 * cert.F_A * (1 + 1e-12);
  for (const auto& [key, k] : cert.pairing) {
    (void)k;
    const auto [i, j] = key;
    if (i == j) continue;
    const CoverElement& A = cert.refinement[i];
    const CoverElement& B = cert.refinement[j];
    NerveEdge edge{i, j, {}, {}, 0};
    double best = std::numeric_limits<double>::infinity();
    int shared = -1, ea = -1, eb = -1;
    for (std::size_t q = 0; q < A.members.size(); ++q) {
      int v = A.members[q];
      int bs = B.member_slot(v);
      if (bs >= 0 && A.center_dist[q] + B.center_dist[bs] < best) {
        best = A.center_dist[q] + B.center_dist[bs];
        shared = v;
      }
    }
    if (shared >= 0) {
      edge.z = s.vertex_point(shared);
      edge.curve = reversed(path_to_center(s, A, shared));
      append_path(edge.curve, path_to_center(s, B, shared));
    } else {
      for (std::size_t q = 0; q < A.members.size(); ++q)
        for (const auto& [w, me] : s.vertex_neighbors(A.members[q])) {
          int bs = B.member_slot(w);
          if (bs < 0) continue;
          double len = A.center_dist[q] + s.edge_length(me) + B.center_dist[bs];
          if (len < best) {
            best = len;
            ea = A.members[q];
            eb = w;
          }
        }
      if (ea < 0) throw Error(ErrorCode::NotAGoodCover, "paired refinement elements do not meet");
      int me = s.find_edge(ea, eb);
      edge.z = s.edge_point(me, 0.5);
      edge.curve = reversed(path_to_center(s, A, ea));
      edge.curve.points.push_back(edge.z);
      SurfacePath tail = path_to_center(s, B, eb);
      edge.curve.points.insert(edge.curve.points.end(), tail.points.begin(), tail.points.end());
    }
    edge.length = path_length(s, edge.curve);
    if (edge.length > limit)
      throw Error(ErrorCode::EdgeTooLong, "nerve edge " + std::to_string(i) + "-" + std::to_string(j) +
                                              " has length " + std::to_string(edge.length) +
                                              " > 2 F_A = " + std::to_string(2 * cert.F_A));
    add_edge(g, std::move(edge));
  }
  finish(g);
  return g;
}

NerveGraph abstract_nerve(int vertex_count, const std::vector<std::pair<int, int>>& edges) {
  NerveGraph g;
  g.points.assign(vertex_count, SurfacePoint{});
  g.center_vertex.assign(vertex_count, -1);
  g.adjacency.assign(vertex_count, {});
  for (auto [a, b] : edges) {
    if (a == b || a < 0 || b < 0 || a >= vertex_count || b >= vertex_count)
      throw Error(ErrorCode::ConfigError, "bad abstract nerve edge");
    if (a > b) std::swap(a, b);
    if (g.index.count({a, b})) continue;
    add_edge(g, NerveEdge{a, b, {}, {}, 0});
  }
  finish(g);
  return g;
}

bool is_valid_loop(const NerveGraph& g, const SimplicialLoop& alpha) {
  const auto& v = alpha.vertices;
  if (v.empty()) return false;
  for (int x : v)
    if (x < 0 || x >= g.vertex_count()) return false;
  if (v.size() == 1) return true;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!g.adjacent(v[i], v[(i + 1) % v.size()])) return false;
  return true;
}

SimplicialLoop canonical_form(const SimplicialLoop& alpha, bool allow_reversal) {
  const auto& v = alpha.vertices;
  const std::size_t m = v.size();
  if (m <= 1) return alpha;
  std::vector<int> best, cand(m);
  auto consider = [&](const std::vector<int>& seq) {
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t i = 0; i < m; ++i) cand[i] = seq[(r + i) % m];
      if (best.empty() || cand < best) best = cand;
    }
  };
  consider(v);
  if (allow_reversal) consider(std::vector<int>(v.rbegin(), v.rend()));
  return {best};
}

SurfacePath realize(const NerveGraph& g, const SimplicialLoop& alpha) {
  const auto& v = alpha.vertices;
  if (v.size() <= 1) return constant_path(g.points[v.front()]);
  SurfacePath out;
  for (std::size_t i = 0; i < v.size(); ++i) append_path(out, g.edge_curve(v[i], v[(i + 1) % v.size()]));
  return out;
}

LoopCensus enumerate_loops(const NerveGraph& g, int X, bool allow_reversal, std::uint64_t cap) {
  if (X < 1) throw Error(ErrorCode::ConfigError, "X must be at least 1");
  const int n = g.vertex_count();
  // Walks examined: rooted walks of length <= X over vertices >= root.
  double estimate = 0;
  {
    std::vector<double> ways(n), next(n);
    for (int root = 0; root < n; ++root) {
      std::fill(ways.begin(), ways.end(), 0.0);
      ways[root] = 1;
      for (int len = 1; len <= X && estimate <= double(cap); ++len) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int u = root; u < n; ++u)
          if (ways[u] > 0)
            for (int w : g.adjacency[u])
              if (w >= root) next[w] += ways[u];
        ways.swap(next);
        for (int u = root; u < n; ++u) estimate += ways[u];
      }
    }
  }
  if (estimate > double(cap))
    throw Error(ErrorCode::TooLargeToEnumerate,
                "loop census needs about " + std::to_string(estimate) + " walks (cap " + std::to_string(cap) + ")");

  LoopCensus census;
  std::set<SimplicialLoop> found;
  for (int v = 0; v < n; ++v) found.insert(SimplicialLoop{{v}});
  std::vector<int> walk;
  // Every loop has a rotation that starts at its least vertex, so rooting
  // walks at the least vertex reaches each class at least once.
  auto dfs = [&](auto&& self, int root) -> void {
    const int u = walk.back();
    for (int w : g.adjacency[u]) {
      if (w < root) continue;
      ++census.walks_examined;
      const int len = static_cast<int>(walk.size());  // edges after this step
      if (w == root && len >= 2) found.insert(canonical_form(SimplicialLoop{walk}, allow_reversal));
      if (len < X) {
        walk.push_back(w);
        self(self, root);
        walk.pop_back();
      }
    }
  };
  for (int root = 0; root < n; ++root) {
    walk.assign(1, root);
    dfs(dfs, root);
  }
  census.loops.assign(found.begin(), found.end());
  return census;
}

}  // namespace geocontract
