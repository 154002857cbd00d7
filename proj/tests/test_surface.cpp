#include "doctest.h"

#include <cmath>

#include "geocontract/errors.hpp"
#include "geocontract/mesh_io.hpp"
#include "support.hpp"

using namespace geocontract;

namespace {

const char* kTetraOff = R"(OFF
4 4 0
0 0 0
1 0 0
0.5 0.8660254037844386 0
0.5 0.28867513459481287 0.816496580927726
3 0 2 1
3 0 1 3
3 1 2 3
3 2 0 3
)";

}  // namespace

TEST_CASE("regular tetrahedron OFF has area sqrt 3") {
  const MetricSurface s = load_surface(kTetraOff, MeshFormat::Off);
  CHECK(s.vertex_count() == 4);
  CHECK(s.face_count() == 4);
  CHECK(s.area() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("icosphere OBJ round trip keeps the Euler counts") {
  const MetricSurface s = load_surface(to_obj(fixtures::icosphere(4)), MeshFormat::Obj);
  CHECK(s.vertex_count() == 2562);
  CHECK(s.face_count() == 5120);
}

TEST_CASE("open meshes are rejected") {
  const char* open = "OFF\n4 3 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 1 2 3\n";
  try {
    load_surface(open, MeshFormat::Off);
    FAIL("expected TopologyError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TopologyError);
  }
  CHECK_THROWS_AS(load_surface("OFF\n3 1 0\n0 0 0\n1 0\n", MeshFormat::Off), Error);
}

TEST_CASE("content hash notices a 1e-6 perturbation") {
  MetricSurface a = fixtures::icosphere(2);
  std::vector<Vec3> v = a.vertices();
  v[5].x += 1e-6;
  MetricSurface b(v, a.triangles());
  CHECK(a.content_hash() != b.content_hash());
  CHECK(a.content_hash() == fixtures::icosphere(2).content_hash());
}

TEST_CASE("geodesic distances") {
  MetricSurface ico = fixtures::icosphere(4);
  const SurfacePoint p = ico.vertex_point(0);
  CHECK(path_length(ico, geodesic(ico, p, p)) == doctest::Approx(0.0));

  const Vec3 anti = ico.vertices()[0] * -1.0;
  const SurfacePoint q = ico.vertex_point(testing::nearest_vertex(ico, anti));
  const double d = path_length(ico, geodesic(ico, p, q, 0.05));
  CHECK(d >= M_PI * 0.98);
  CHECK(d <= M_PI * 1.05);

  MetricSurface tet = load_surface(kTetraOff, MeshFormat::Off);
  const SurfacePoint m1 = tet.edge_point(tet.find_edge(0, 1), 0.5);
  const SurfacePoint m2 = tet.edge_point(tet.find_edge(2, 3), 0.5);
  CHECK(path_length(tet, geodesic(tet, m1, m2, 0.05)) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("diameter estimates") {
  MetricSurface ico = fixtures::icosphere(4);
  const double D = estimate_diameter(ico, 64, 3);
  CHECK(D >= 0.97 * M_PI);
  CHECK(D <= M_PI * 1.001);
  CHECK(ico.diameter().value() == D);

  MetricSurface tet = load_surface(kTetraOff, MeshFormat::Off);
  CHECK(estimate_diameter(tet, 100, 1) == doctest::Approx(1.0).epsilon(1e-9));

  MetricSurface a = fixtures::icosphere(2);
  MetricSurface b = fixtures::icosphere(2);
  CHECK(estimate_diameter(a, 1000, 1) == estimate_diameter(b, a.vertex_count(), 99));
}

TEST_CASE("loop lengths") {
  MetricSurface ico = fixtures::icosphere(4);
  CHECK(loop_length(ico, point_loop(ico.vertex_point(3), 8)) == 0.0);

  const PolyLoop eq = testing::latitude_loop(ico, 0.0, 64);
  CHECK(loop_length(ico, eq) == doctest::Approx(2 * M_PI).epsilon(0.01));
  CHECK(loop_length(ico, cyclic_shift(eq, 17)) == doctest::Approx(loop_length(ico, eq)).epsilon(1e-12));
  CHECK(loop_is_consistent(ico, eq));

  MetricSurface tet = fixtures::tetrahedron();
  const PolyLoop bounce = make_loop(tet, {tet.vertex_point(0), tet.vertex_point(1)});
  CHECK(loop_length(tet, bounce) == doctest::Approx(2.0).epsilon(1e-9));
}

namespace {

// K = 3 frames over the tetrahedron where sample j slides along edge (0,1)
// by steps[j][t].
DiscreteHomotopy sliding(const MetricSurface& s, const std::vector<std::vector<double>>& steps) {
  const int e = s.find_edge(0, 1);
  const int K = static_cast<int>(steps.size());
  std::vector<double> at(K, 0.0);
  auto frame = [&] {
    std::vector<SurfacePoint> pts;
    for (int j = 0; j < K; ++j) pts.push_back(s.edge_point(e, at[j]));
    PolyLoop l;
    l.samples = pts;
    l.segments.assign(K, {});
    for (int j = 0; j < K; ++j) l.segments[j] = SurfacePath{{pts[j], pts[(j + 1) % K]}};
    return l;
  };
  DiscreteHomotopy h = constant_homotopy(frame());
  for (std::size_t t = 0; t < steps[0].size(); ++t) {
    std::vector<SurfacePath> moves;
    std::vector<double> before = at;
    for (int j = 0; j < K; ++j) at[j] += steps[j][t];
    for (int j = 0; j < K; ++j) moves.push_back(SurfacePath{{s.edge_point(e, before[j]), s.edge_point(e, at[j])}});
    append_frame(s, h, frame(), moves);
  }
  return h;
}

}  // namespace

TEST_CASE("homotopy widths") {
  MetricSurface tet = fixtures::tetrahedron();
  const PolyLoop l = make_loop(tet, {tet.vertex_point(0), tet.vertex_point(1), tet.vertex_point(2)});
  DiscreteHomotopy c = constant_homotopy(l);
  append_frame(tet, c, l);
  CHECK(homotopy_width(tet, c) == 0.0);

  CHECK(homotopy_width(tet, sliding(tet, {{0.7}, {0.0}, {0.0}})) == doctest::Approx(0.7));
  const DiscreteHomotopy h3 = sliding(tet, {{0.1, 0.2}, {0.25, 0.25}, {0.4, 0.5}});
  CHECK(homotopy_width(tet, h3) == doctest::Approx(0.9));
  const auto lens = trajectory_lengths(tet, h3);
  CHECK(lens[0] == doctest::Approx(0.3));
  CHECK(lens[1] == doctest::Approx(0.5));
}

TEST_CASE("concatenation and reversal") {
  MetricSurface tet = fixtures::tetrahedron();
  const DiscreteHomotopy h1 = sliding(tet, {{0.3}, {0.0}, {0.0}});
  const DiscreteHomotopy tail = constant_homotopy(h1.target());
  CHECK(homotopy_width(tet, concat_homotopies(tet, h1, tail)) == doctest::Approx(homotopy_width(tet, h1)));
  const DiscreteHomotopy back = concat_homotopies(tet, h1, reverse_homotopy(h1));
  CHECK(homotopy_width(tet, back) <= 2 * homotopy_width(tet, h1) + 1e-12);
  CHECK(back.target().samples == h1.source().samples);
}

TEST_CASE("rotating a loop along itself") {
  MetricSurface ico = fixtures::icosphere(4);
  const PolyLoop eq = testing::latitude_loop(ico, 0.0, 64);
  const double L = loop_length(ico, eq);
  CHECK(homotopy_width(ico, rotate_loop_homotopy(ico, eq, 0.0)) == doctest::Approx(0.0));
  CHECK(homotopy_width(ico, rotate_loop_homotopy(ico, eq, L / 2)) <= L / 2 + 1e-9);
  const double seg = path_length(ico, eq.segments[0]);
  CHECK(homotopy_width(ico, rotate_loop_homotopy(ico, eq, seg)) == doctest::Approx(seg).epsilon(0.05));
}
