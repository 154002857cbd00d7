#include "geocontract/surface.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>

#include "geocontract/errors.hpp"
#include "geocontract/geodesic.hpp"

namespace geocontract {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TopologyError: return "TopologyError";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::NotAGoodCover: return "NotAGoodCover";
    case ErrorCode::DisconnectedElement: return "DisconnectedElement";
    case ErrorCode::LoopEscapesElement: return "LoopEscapesElement";
    case ErrorCode::EdgeTooLong: return "EdgeTooLong";
    case ErrorCode::TooLargeToEnumerate: return "TooLargeToEnumerate";
    case ErrorCode::NoItinerary: return "NoItinerary";
    case ErrorCode::CannotShorten: return "CannotShorten";
    case ErrorCode::ContractViolation: return "ContractViolation";
    case ErrorCode::DifferentApproximations: return "DifferentApproximations";
    case ErrorCode::BasepointMismatch: return "BasepointMismatch";
    case ErrorCode::IterationCapExceeded: return "IterationCapExceeded";
    case ErrorCode::SingleStepTooWide: return "SingleStepTooWide";
    case ErrorCode::TreeInvariantViolation: return "TreeInvariantViolation";
    case ErrorCode::NoDuplicateFound: return "NoDuplicateFound";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::WidthBoundViolated: return "WidthBoundViolated";
    case ErrorCode::SerializationError: return "SerializationError";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Error";
}

double heron_area(double a, double b, double c) {
  // Kahan's stable form; requires a >= b >= c.
  std::array<double, 3> l{a, b, c};
  std::sort(l.begin(), l.end(), std::greater<>());
  const double x = l[0], y = l[1], z = l[2];
  const double q = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return q > 0 ? 0.25 * std::sqrt(q) : 0.0;
}

MetricSurface::MetricSurface(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      graph_mutex_(std::make_unique<std::mutex>()) {
  build_topology();
}

MetricSurface::~MetricSurface() = default;
MetricSurface::MetricSurface(MetricSurface&&) noexcept = default;
MetricSurface& MetricSurface::operator=(MetricSurface&&) noexcept = default;

void MetricSurface::build_topology() {
  const int nv = vertex_count();
  const int nf = face_count();
  if (nv < 4 || nf < 4) throw Error(ErrorCode::TopologyError, "too few vertices or faces");
  for (const auto& t : triangles_) {
    for (int c : t)
      if (c < 0 || c >= nv) throw Error(ErrorCode::TopologyError, "face index out of range");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw Error(ErrorCode::TopologyError, "degenerate face");
  }

  // Undirected edge -> incident faces.
  std::map<std::pair<int, int>, std::vector<int>> incident;
  for (int f = 0; f < nf; ++f) {
    for (int i = 0; i < 3; ++i) {
      int a = triangles_[f][i], b = triangles_[f][(i + 1) % 3];
      incident[{std::min(a, b), std::max(a, b)}].push_back(f);
    }
  }
  for (const auto& [key, faces] : incident) {
    if (faces.size() == 1)
      throw Error(ErrorCode::TopologyError, "boundary edge " + std::to_string(key.first) + "-" +
                                                std::to_string(key.second));
    if (faces.size() > 2)
      throw Error(ErrorCode::TopologyError, "non-manifold edge " + std::to_string(key.first) +
                                                "-" + std::to_string(key.second));
  }

  // Orient consistently by BFS over face adjacency.
  auto has_directed = [&](int f, int a, int b) {
    for (int i = 0; i < 3; ++i)
      if (triangles_[f][i] == a && triangles_[f][(i + 1) % 3] == b) return true;
    return false;
  };
  std::vector<int> state(nf, 0);  // 0 unseen, 1 kept, 2 flipped
  std::queue<int> queue;
  state[0] = 1;
  queue.push(0);
  int seen = 1;
  while (!queue.empty()) {
    int f = queue.front();
    queue.pop();
    for (int i = 0; i < 3; ++i) {
      int a = triangles_[f][i], b = triangles_[f][(i + 1) % 3];
      const auto& faces = incident[{std::min(a, b), std::max(a, b)}];
      int g = faces[0] == f ? faces[1] : faces[0];
      bool consistent = has_directed(g, b, a);
      if (state[g] == 0) {
        if (!consistent) std::swap(triangles_[g][1], triangles_[g][2]);
        state[g] = consistent ? 1 : 2;
        ++seen;
        queue.push(g);
      } else if (!consistent) {
        throw Error(ErrorCode::TopologyError, "non-orientable surface");
      }
    }
  }
  if (seen != nf) throw Error(ErrorCode::TopologyError, "surface is disconnected");

  edges_.clear();
  edge_faces_.clear();
  for (const auto& [key, faces] : incident) {
    edge_index_[key] = static_cast<int>(edges_.size());
    edges_.push_back({key.first, key.second});
    edge_faces_.push_back({faces[0], faces[1]});
  }
  face_edges_.resize(nf);
  for (int f = 0; f < nf; ++f)
    for (int i = 0; i < 3; ++i) face_edges_[f][i] = find_edge(triangles_[f][i], triangles_[f][(i + 1) % 3]);

  edge_lengths_.resize(edges_.size());
  min_edge_ = std::numeric_limits<double>::infinity();
  max_edge_ = 0;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    double l = distance(vertices_[edges_[e][0]], vertices_[edges_[e][1]]);
    if (!(l > 0)) throw Error(ErrorCode::TopologyError, "zero-length edge");
    edge_lengths_[e] = l;
    min_edge_ = std::min(min_edge_, l);
    max_edge_ = std::max(max_edge_, l);
  }
  area_ = 0;
  for (int f = 0; f < nf; ++f) {
    double a = edge_lengths_[face_edges_[f][0]], b = edge_lengths_[face_edges_[f][1]],
           c = edge_lengths_[face_edges_[f][2]];
    if (!(a < b + c && b < a + c && c < a + b))
      throw Error(ErrorCode::TopologyError, "face " + std::to_string(f) + " violates the triangle inequality");
    area_ += heron_area(a, b, c);
  }

  // Vertex -> faces, vertex -> neighbours (CSR).
  vf_offsets_.assign(nv + 1, 0);
  for (const auto& t : triangles_)
    for (int c : t) ++vf_offsets_[c + 1];
  for (int v = 0; v < nv; ++v) vf_offsets_[v + 1] += vf_offsets_[v];
  vf_faces_.resize(vf_offsets_[nv]);
  std::vector<int> fill(vf_offsets_.begin(), vf_offsets_.end() - 1);
  for (int f = 0; f < nf; ++f)
    for (int c : triangles_[f]) vf_faces_[fill[c]++] = f;

  vn_offsets_.assign(nv + 1, 0);
  for (const auto& e : edges_) {
    ++vn_offsets_[e[0] + 1];
    ++vn_offsets_[e[1] + 1];
  }
  for (int v = 0; v < nv; ++v) vn_offsets_[v + 1] += vn_offsets_[v];
  vn_items_.resize(vn_offsets_[nv]);
  fill.assign(vn_offsets_.begin(), vn_offsets_.end() - 1);
  for (int e = 0; e < edge_count(); ++e) {
    vn_items_[fill[edges_[e][0]]++] = {edges_[e][1], e};
    vn_items_[fill[edges_[e][1]]++] = {edges_[e][0], e};
  }
}

std::span<const int> MetricSurface::vertex_faces(int v) const {
  return {vf_faces_.data() + vf_offsets_[v], static_cast<std::size_t>(vf_offsets_[v + 1] - vf_offsets_[v])};
}

std::span<const std::array<int, 2>> MetricSurface::vertex_neighbors(int v) const {
  return {vn_items_.data() + vn_offsets_[v], static_cast<std::size_t>(vn_offsets_[v + 1] - vn_offsets_[v])};
}

int MetricSurface::find_edge(int a, int b) const {
  auto it = edge_index_.find({std::min(a, b), std::max(a, b)});
  return it == edge_index_.end() ? -1 : it->second;
}

double MetricSurface::length_scale() const {
  if (diameter_) return *diameter_;
  Vec3 lo = vertices_[0], hi = vertices_[0];
  for (const auto& v : vertices_) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }
  return distance(lo, hi);
}

void MetricSurface::set_epsilon(double eps) {
  if (!(eps > 0 && eps <= 1)) throw Error(ErrorCode::ConfigError, "epsilon must lie in (0, 1]");
  epsilon_ = eps;
}

int MetricSurface::steiner_subdivisions() const {
  return std::clamp(static_cast<int>(std::ceil(0.25 / epsilon_)), 1, 8);
}

Vec3 MetricSurface::position(const SurfacePoint& p) const {
  const auto& t = triangles_[p.face];
  return vertices_[t[0]] * p.bary[0] + vertices_[t[1]] * p.bary[1] + vertices_[t[2]] * p.bary[2];
}

SurfacePoint MetricSurface::vertex_point(int v) const {
  int f = vertex_faces(v)[0];
  SurfacePoint p{f, {0, 0, 0}};
  for (int i = 0; i < 3; ++i)
    if (triangles_[f][i] == v) p.bary[i] = 1.0;
  return p;
}

SurfacePoint MetricSurface::edge_point(int e, double t) const {
  int f = edge_faces_[e][0];
  SurfacePoint p{f, {0, 0, 0}};
  for (int i = 0; i < 3; ++i) {
    if (triangles_[f][i] == edges_[e][0]) p.bary[i] = 1.0 - t;
    if (triangles_[f][i] == edges_[e][1]) p.bary[i] = t;
  }
  return p;
}

namespace {
constexpr double kZeroWeight = 1e-12;
}

Carriers MetricSurface::carriers(const SurfacePoint& p) const {
  Carriers c;
  for (int i = 0; i < 3; ++i)
    if (p.bary[i] > kZeroWeight) c.v[c.count++] = triangles_[p.face][i];
  return c;
}

std::vector<int> MetricSurface::faces_containing(const SurfacePoint& p) const {
  Carriers c = carriers(p);
  if (c.count == 3) return {p.face};
  if (c.count == 2) {
    int e = find_edge(c.v[0], c.v[1]);
    return {edge_faces_[e][0], edge_faces_[e][1]};
  }
  auto faces = vertex_faces(c.v[0]);
  return {faces.begin(), faces.end()};
}

int MetricSurface::common_face(const SurfacePoint& a, const SurfacePoint& b) const {
  Carriers ca = carriers(a), cb = carriers(b);
  for (int f : faces_containing(a)) {
    bool ok = true;
    for (int v : cb) {
      const auto& t = triangles_[f];
      if (t[0] != v && t[1] != v && t[2] != v) ok = false;
    }
    if (ok) return f;
  }
  (void)ca;
  return -1;
}

SurfacePoint MetricSurface::rebase(const SurfacePoint& p, int f) const {
  if (p.face == f) return p;
  SurfacePoint out{f, {0, 0, 0}};
  const auto& src = triangles_[p.face];
  const auto& dst = triangles_[f];
  for (int i = 0; i < 3; ++i) {
    if (p.bary[i] <= kZeroWeight) continue;
    for (int j = 0; j < 3; ++j)
      if (dst[j] == src[i]) out.bary[j] = p.bary[i];
  }
  double sum = out.bary[0] + out.bary[1] + out.bary[2];
  for (double& w : out.bary) w /= sum;
  return out;
}

SurfacePoint MetricSurface::interpolate(const SurfacePoint& a, const SurfacePoint& b, double t) const {
  if (t <= 0) return a;
  if (t >= 1) return b;
  int f = common_face(a, b);
  if (f < 0) f = a.face;
  SurfacePoint ra = rebase(a, f), rb = rebase(b, f);
  SurfacePoint out{f, {0, 0, 0}};
  for (int i = 0; i < 3; ++i) {
    double w = (1 - t) * ra.bary[i] + t * rb.bary[i];
    out.bary[i] = w <= kZeroWeight ? 0.0 : w;
  }
  double sum = out.bary[0] + out.bary[1] + out.bary[2];
  for (double& w : out.bary) w /= sum;
  return out;
}

std::uint64_t MetricSurface::content_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& v : vertices_) {
    mix(std::bit_cast<std::uint64_t>(v.x));
    mix(std::bit_cast<std::uint64_t>(v.y));
    mix(std::bit_cast<std::uint64_t>(v.z));
  }
  for (const auto& t : triangles_)
    for (int c : t) mix(static_cast<std::uint64_t>(c));
  return h;
}

const SteinerGraph& MetricSurface::steiner_graph(int subdivisions) const {
  std::lock_guard lock(*graph_mutex_);
  auto& slot = graphs_[subdivisions];
  if (!slot) slot = std::make_unique<SteinerGraph>(*this, subdivisions);
  return *slot;
}

}  // namespace geocontract
