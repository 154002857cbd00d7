#include "doctest.h"

#include <cmath>

#include "geocontract/bounds.hpp"
#include "geocontract/serialize.hpp"
#include "support.hpp"

using namespace geocontract;

namespace {

BoundsReport sample_report() {
  BoundsReport r;
  r.n = 2;
  r.D_hat = 3.14;
  r.area = 12.5;
  r.N = 4;
  r.F_A = 2.8;
  r.F_B = 3.9;
  r.G = 3.5;
  r.X = 3;
  r.Z_hat = 2;
  r.measured_W = 0.25;
  r.N0 = 14;
  return r;
}

}  // namespace

TEST_CASE("depth bound table") {
  CHECK(depth_bound(3, 10, 1) == 22);
  CHECK(depth_bound(3, 0.5, 1) == 6);
  CHECK(depth_bound(2.5, 0, 0) == 5);
  for (double L : {0.0, 1.0, 4.0})
    for (double W : {0.0, 2.0, 7.0})
      for (double D : {0.0, 1.0, 3.0}) {
        CHECK(depth_bound(L + 0.5, W, D) >= depth_bound(L, W, D));
        CHECK(depth_bound(L, W + 0.5, D) >= depth_bound(L, W, D));
        CHECK(depth_bound(L, W, D + 0.5) >= depth_bound(L, W, D));
      }
}

TEST_CASE("closed geodesic length formula table") {
  CHECK(nabutovsky_rotman_length(1, 1, 1, 0) == 5);
  CHECK(nabutovsky_rotman_length(2, 1, 1, 1) == 12);
  CHECK(nabutovsky_rotman_length(2, 2, 2, 3) == 51);
  for (int k = 1; k <= 3; ++k)
    for (int m = 1; m <= 3; ++m) {
      CHECK(nabutovsky_rotman_length(k, m, 1.5, 2) > nabutovsky_rotman_length(k, m, 1, 2));
      CHECK(nabutovsky_rotman_length(k, m, 1, 2.5) > nabutovsky_rotman_length(k, m, 1, 2));
    }
}

TEST_CASE("main bound readings") {
  const MainBound a = main_bound(2, 1, 0);
  CHECK(a.literal == 21);
  CHECK(a.k2 == 21);
  CHECK(a.A_final == 21);
  const MainBound b = main_bound(2, 2, 0);
  CHECK(b.literal == 22);
  CHECK(b.k2 == 42);
  CHECK(b.A_final == 42);
  const MainBound c = main_bound(4, 1, 10);
  CHECK(c.literal == 111);
  CHECK(c.k2 == 111);
  CHECK(c.A_final == 111);
  CHECK(c.A_final >= c.literal);
  CHECK(c.A_final >= c.k2);
  CHECK(testing::code_of([] { main_bound(1, 1, 1); }) == ErrorCode::ConfigError);
}

TEST_CASE("measured depth of simple contractions") {
  MetricSurface s = testing::with_diameter(fixtures::icosphere(4));
  auto on_equator = [&](double a) { return s.vertex_point(testing::nearest_vertex(s, {std::cos(a), std::sin(a), 0})); };
  const SurfacePoint p = on_equator(0);
  const PolyLoop l0 = make_loop(s, {p, on_equator(1.0)});
  const PolyLoop l1 = make_loop(s, {p, on_equator(1.3)});
  DiscreteHomotopy h = constant_homotopy(l0);
  append_frame(s, h, l1);
  append_frame(s, h, point_loop(p, 2));
  const double depth = measure_depth(s, l0, h);
  CHECK(depth == doctest::Approx(loop_length(s, l1) - loop_length(s, l0)));
  CHECK(depth == doctest::Approx(0.6).epsilon(0.03));

  DiscreteHomotopy down = constant_homotopy(l1);
  append_frame(s, down, l0);
  append_frame(s, down, point_loop(p, 2));
  CHECK(measure_depth(s, l1, down) == 0.0);
  const PolyLoop pt = point_loop(p, 4);
  CHECK(measure_depth(s, pt, constant_homotopy(pt)) == 0.0);
}

TEST_CASE("derived report fields") {
  BoundsReport r = sample_report();
  derive_bounds(r);
  CHECK(r.F == 3.9);
  CHECK(r.G_sigma == doctest::Approx(3.5 + 4 * 2.8));
  CHECK(r.Y == doctest::Approx(2 * r.G_sigma));
  CHECK(r.m == r.n);
  CHECK(r.S_p_source == "bound");
  CHECK(r.B == total_width_bound(4, 3, 3.14, r.Y, 0.25).decimal);
  CHECK(std::stod(r.S_p_bound) == doctest::Approx(depth_bound(3 * 3.14, std::stod(r.B), 3.14)));
  CHECK(r.A_final == std::max(r.F_main, r.L_thm4));
  CHECK(r.within_preset_constants);
  CHECK(std::stod(r.B_preset) == doctest::Approx(std::pow(17.0, 3) * (139 * 3.14 + 0.25)));

  r.measured_total_width = 5.0;
  derive_bounds(r);
  CHECK(r.S_p_source == "measured");
  CHECK(r.S_p == depth_bound(3 * 3.14, 5.0, 3.14));

  derive_bounds(r, 1.0);
  CHECK(r.S_p_source == "override");
  CHECK(r.S_p == 1.0);
}

TEST_CASE("report shows both length readings") {
  BoundsReport r = sample_report();
  r.D_hat = 2;
  derive_bounds(r, 0.0);
  CHECK(r.F_main == 22);
  CHECK(r.L_thm4 == 42);
  CHECK(r.A_final == 42);
  const std::string json = emit_report(r, {"fixture", "00ff", 1, "{}"});
  CHECK(json.find("\"F_main\": 22.0") != std::string::npos);
  CHECK(json.find("\"L_thm4\": 42.0") != std::string::npos);
}

TEST_CASE("report round trip") {
  BoundsReport r = sample_report();
  r.measured_total_width = 4.25;
  r.measured_depth = 0.5;
  r.measured_delta = 0.125;
  derive_bounds(r);
  const Provenance p{"icosphere3", hash_hex(0x1234abcdULL), 42, R"({"seed": 42, "mesh": "icosphere3"})"};

  const std::string no_geodesic = emit_report(r, p);
  CHECK(no_geodesic.find("geodesic_to_A_ratio") == std::string::npos);
  CHECK(no_geodesic.find("shortest_geodesic_found") == std::string::npos);
  CHECK(no_geodesic.back() == '\n');

  r.shortest_geodesic_found = 6.28;
  const std::string text = emit_report(r, p);
  CHECK(text.find("geodesic_to_A_ratio") != std::string::npos);
  const auto [back, prov] = parse_report(text);
  CHECK(emit_report(back, prov) == text);
  CHECK(prov.mesh_hash == "000000001234abcd");
  CHECK(prov.seed == 42);
  CHECK(testing::code_of([] { parse_report("{\"n\": 2}"); }) == ErrorCode::SerializationError);
}
