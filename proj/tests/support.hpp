#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "geocontract/approximation.hpp"
#include "geocontract/birkhoff.hpp"
#include "geocontract/contraction.hpp"
#include "geocontract/cover.hpp"
#include "geocontract/errors.hpp"
#include "geocontract/curves.hpp"
#include "geocontract/fixtures.hpp"
#include "geocontract/geodesic.hpp"
#include "geocontract/nerve.hpp"

namespace testing {

using namespace geocontract;

/// Code of the Error raised by f, if any.
inline std::optional<ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

struct Setup {
  MetricSurface s;
  double D = 0;
  GoodCoverCertificate cert;
  NerveGraph nerve;
};

inline MetricSurface with_diameter(MetricSurface s, int samples = 16) {
  estimate_diameter(s, samples, 1);
  return s;
}

inline Setup make_setup(const std::string& mesh, double r, std::uint64_t seed = 7) {
  Setup out{with_diameter(fixtures::by_name(mesh)), 0, {}, {}};
  out.D = *out.s.diameter();
  BallCover bc = build_ball_cover(out.s, r, seed);
  out.cert = certify_cover(out.s, std::move(bc.refinement), std::move(bc.cover), 64, seed + 1);
  out.nerve = build_nerve(out.s, out.cert);
  return out;
}

inline int nearest_vertex(const MetricSurface& s, const Vec3& p) {
  int best = 0;
  double bd = 1e300;
  for (int v = 0; v < s.vertex_count(); ++v) {
    const double d = distance(s.vertices()[v], p);
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  return best;
}

/// Section of the mesh by the plane z = height, K samples.
inline PolyLoop latitude_loop(const MetricSurface& s, double height, int K) {
  return *plane_section(s, {0, 0, 1}, height, K);
}

/// Closed random walk on the mesh graph, closed by a geodesic and resampled.
inline PolyLoop random_walk_loop(const MetricSurface& s, std::mt19937_64& rng, int steps, int K) {
  std::uniform_int_distribution<int> pick(0, s.vertex_count() - 1);
  int v = pick(rng);
  SurfacePath path{{s.vertex_point(v)}};
  for (int i = 0; i < steps; ++i) {
    auto nb = s.vertex_neighbors(v);
    v = nb[std::uniform_int_distribution<int>(0, static_cast<int>(nb.size()) - 1)(rng)][0];
    path.points.push_back(s.vertex_point(v));
  }
  append_path(path, geodesic(s, path.back(), path.front()));
  return loop_from_path(s, path, K);
}

/// Plane section with a random normal and offset inside the mesh extent.
inline std::optional<PolyLoop> random_section(const MetricSurface& s, std::mt19937_64& rng, int K, double reach = 0.8) {
  std::normal_distribution<double> g;
  Vec3 n{g(rng), g(rng), g(rng)};
  n = n * (1.0 / norm(n));
  double lo = 1e300, hi = -1e300;
  for (const auto& p : s.vertices()) {
    lo = std::min(lo, dot(p, n));
    hi = std::max(hi, dot(p, n));
  }
  const double mid = (lo + hi) / 2, half = (hi - lo) / 2;
  const double c = mid + reach * half * std::uniform_real_distribution<double>(-1, 1)(rng);
  return plane_section(s, n, c, K);
}

/// Either kind of random loop, kept only when no longer than `cap`.
inline PolyLoop random_loop(const MetricSurface& s, std::mt19937_64& rng, int K, double cap) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::optional<PolyLoop> loop;
    if (attempt % 2 == 0) {
      loop = random_section(s, rng, K);
    } else {
      loop = random_walk_loop(s, rng, 3 + static_cast<int>(rng() % 12), K);
    }
    if (loop && loop_length(s, *loop) <= cap && !is_point_curve(s, *loop)) return *loop;
  }
  return point_loop(s.vertex_point(0), K);
}

/// build_tree, widening the block width until no single step exceeds it.
inline ContractionTree grow_tree(const Setup& st, const PolyLoop& loop, int X, double rho, double block) {
  TreeConfig tc{X, {}, block};
  tc.bpfl.rho = rho;
  for (;;) {
    try {
      return build_tree(st.s, loop, st.cert, st.nerve, tc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingleStepTooWide || tc.block_width > st.D) throw;
      tc.block_width *= 1.5;
    }
  }
}

}  // namespace testing
