#include "geocontract/fixtures.hpp"

#include <cmath>
#include <map>

#include "geocontract/errors.hpp"

namespace geocontract::fixtures {

namespace {

struct RawMesh {
  std::vector<Vec3> verts;
  std::vector<MetricSurface::Triangle> tris;
};

RawMesh unit_icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  RawMesh m;
  m.verts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
             {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.verts) v = normalized(v);
  m.tris = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
            {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
            {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int round = 0; round < subdivisions; ++round) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      m.verts.push_back(normalized(m.verts[a] + m.verts[b]));
      int id = static_cast<int>(m.verts.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<MetricSurface::Triangle> next;
    next.reserve(m.tris.size() * 4);
    for (const auto& f : m.tris) {
      int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    m.tris = std::move(next);
  }
  return m;
}

}  // namespace

MetricSurface tetrahedron() {
  const double s = 1.0 / (2.0 * std::sqrt(2.0));
  std::vector<Vec3> v = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  return MetricSurface(std::move(v), {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}});
}

MetricSurface icosphere(int subdivisions) {
  RawMesh m = unit_icosphere(subdivisions);
  return MetricSurface(std::move(m.verts), std::move(m.tris));
}

MetricSurface ellipsoid(double a, double b, double c, int subdivisions) {
  RawMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.verts) v = {a * v.x, b * v.y, c * v.z};
  return MetricSurface(std::move(m.verts), std::move(m.tris));
}

MetricSurface dumbbell(int subdivisions) {
  RawMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.verts) {
    double w = 0.3 + 1.1 * v.x * v.x;
    v = {1.6 * v.x, w * v.y, w * v.z};
  }
  return MetricSurface(std::move(m.verts), std::move(m.tris));
}

MetricSurface bumpy_cap(int subdivisions) {
  RawMesh m = unit_icosphere(subdivisions);
  struct Bump {
    Vec3 dir;
    double amp;
  };
  const Bump bumps[] = {{normalized({0.8, 0.3, 0.5}), 0.22},
                        {normalized({-0.4, 0.9, 0.1}), 0.15},
                        {normalized({-0.6, -0.5, 0.6}), 0.18},
                        {normalized({0.2, -0.8, -0.55}), 0.12}};
  for (auto& v : m.verts) {
    double r = 1.0;
    for (const auto& b : bumps) {
      Vec3 d = v - b.dir;
      r += b.amp * std::exp(-dot(d, d) / 0.3);
    }
    v = v * r;
    v.z *= 0.7;
    v.x *= 1.12;
  }
  return MetricSurface(std::move(m.verts), std::move(m.tris));
}

MetricSurface by_name(const std::string& name) {
  if (name == "tetrahedron") return tetrahedron();
  if (name.rfind("icosphere", 0) == 0 && name.size() == 10 && name[9] >= '0' && name[9] <= '5')
    return icosphere(name[9] - '0');
  if (name == "ellipsoid") return ellipsoid(1.0, 0.8, 0.6, 4);
  if (name == "dumbbell") return dumbbell(3);
  if (name == "bumpy_cap") return bumpy_cap(3);
  throw Error(ErrorCode::ConfigError, "unknown fixture '" + name + "'");
}

std::vector<std::string> names() {
  return {"tetrahedron", "icosphere2", "icosphere3", "icosphere4", "ellipsoid", "dumbbell", "bumpy_cap"};
}

}  // namespace geocontract::fixtures
