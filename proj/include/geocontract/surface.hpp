#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "geocontract/vec3.hpp"

namespace geocontract {

/// A location on the surface: a face and barycentric coordinates within it.
/// Points on edges or vertices have zero coordinates; any face touching the
/// point is an equally valid representative.
struct SurfacePoint {
  int face = 0;
  std::array<double, 3> bary{1.0, 0.0, 0.0};

  bool operator==(const SurfacePoint&) const = default;
};

/// Vertices whose barycentric weight in a point is nonzero.
struct Carriers {
  std::array<int, 3> v{-1, -1, -1};
  int count = 0;

  const int* begin() const { return v.data(); }
  const int* end() const { return v.data() + count; }
};

struct SteinerGraph;

/// Closed, connected, oriented triangle mesh with its intrinsic edge-length
/// metric. Geometry is immutable after construction; the diameter estimate
/// and geodesic accuracy are set once by the pipeline before queries.
class MetricSurface {
 public:
  using Triangle = std::array<int, 3>;

  /// Validates topology (throws Error{TopologyError}) and derives edges,
  /// adjacency, edge lengths and area. Inconsistently oriented faces are
  /// flipped; a non-orientable complex is rejected.
  MetricSurface(std::vector<Vec3> vertices, std::vector<Triangle> triangles);
  ~MetricSurface();
  MetricSurface(MetricSurface&&) noexcept;
  MetricSurface& operator=(MetricSurface&&) noexcept;

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int face_count() const { return static_cast<int>(triangles_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Edge endpoints with first < second.
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  double edge_length(int e) const { return edge_lengths_[e]; }
  const std::vector<double>& edge_lengths() const { return edge_lengths_; }
  const std::array<int, 2>& edge_faces(int e) const { return edge_faces_[e]; }
  /// Edge i of face f joins corners i and (i+1)%3.
  const std::array<int, 3>& face_edges(int f) const { return face_edges_[f]; }
  std::span<const int> vertex_faces(int v) const;
  /// Mesh-graph neighbours of v as (vertex, edge) pairs.
  std::span<const std::array<int, 2>> vertex_neighbors(int v) const;
  int find_edge(int a, int b) const;

  double area() const { return area_; }
  double min_edge_length() const { return min_edge_; }
  double max_edge_length() const { return max_edge_; }

  int dimension() const { return dimension_; }
  void set_dimension(int n) { dimension_ = n; }

  /// Sampled diameter D-hat; unset until estimate_diameter runs.
  std::optional<double> diameter() const { return diameter_; }
  void set_diameter(double d) { diameter_ = d; }
  /// D-hat if known, else the bounding-box diagonal.
  double length_scale() const;
  /// Loops no longer than this are point curves.
  double point_tolerance() const { return 1e-3 * length_scale(); }

  double epsilon() const { return epsilon_; }
  void set_epsilon(double eps);

  Vec3 position(const SurfacePoint& p) const;
  SurfacePoint vertex_point(int v) const;
  SurfacePoint edge_point(int e, double t) const;
  Carriers carriers(const SurfacePoint& p) const;
  /// All faces whose closure contains p.
  std::vector<int> faces_containing(const SurfacePoint& p) const;
  /// A face whose closure contains both points, or -1.
  int common_face(const SurfacePoint& a, const SurfacePoint& b) const;
  /// Re-expresses p in face f (which must contain it).
  SurfacePoint rebase(const SurfacePoint& p, int f) const;
  /// Point at fraction t on the straight segment a-b inside a shared face.
  SurfacePoint interpolate(const SurfacePoint& a, const SurfacePoint& b, double t) const;

  /// FNV-1a over vertex bit patterns and triangle indices.
  std::uint64_t content_hash() const;

  /// Shared Steiner-point graph for the given per-edge subdivision count.
  const SteinerGraph& steiner_graph(int subdivisions) const;
  /// Subdivision count used for the configured epsilon.
  int steiner_subdivisions() const;

 private:
  void build_topology();

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<double> edge_lengths_;
  std::vector<std::array<int, 2>> edge_faces_;
  std::vector<std::array<int, 3>> face_edges_;
  std::vector<int> vf_offsets_, vf_faces_;
  std::vector<int> vn_offsets_;
  std::vector<std::array<int, 2>> vn_items_;
  std::map<std::pair<int, int>, int> edge_index_;
  double area_ = 0, min_edge_ = 0, max_edge_ = 0;
  int dimension_ = 2;
  std::optional<double> diameter_;
  double epsilon_ = 0.05;

  mutable std::unique_ptr<std::mutex> graph_mutex_;
  mutable std::map<int, std::unique_ptr<SteinerGraph>> graphs_;
};

/// Heron area of a triangle from its three edge lengths.
double heron_area(double a, double b, double c);

}  // namespace geocontract
